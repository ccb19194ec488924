#include "ringwave/ring.hpp"
#include "ringwave/dispersion.hpp"
#include "ringwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ringwave {

using constants::two_pi;

namespace {

TwoPortMatrix half_line(double f, const RingSpec& ring) {
    return line_section_abcd(f, ring.cell.line, 0.5 * ring.cell.d);
}

// Chain from station `from` to station `to` walking in direction `step` (+1/-1).
// Shunt elements at both end stations are excluded.
TwoPortMatrix arc_abcd(double f, const RingSpec& ring, int from, int to, int step) {
    const int n = ring.station_count();
    const TwoPortMatrix line = half_line(f, ring);
    const TwoPortMatrix shunt = TwoPortMatrix::shunt_admittance(varactor_admittance(f, ring.cell.varactor));
    TwoPortMatrix t = TwoPortMatrix::identity();
    int s = from;
    while (true) {
        t = t * line;
        s = ((s + step) % n + n) % n;
        if (s == to) return t;
        if (RingSpec::is_varactor_station(s)) t = t * shunt;
    }
}

cplx inductor_z(double f, double l, const PortNetwork& port) {
    return {port.inductor_resistance(l), two_pi * f * l};
}

cplx parallel(cplx a, cplx b) { return a * b / (a + b); }

cplx capacitor_z(double f, double c) { return 1.0 / cplx{0.0, two_pi * f * c}; }

// Impedance of the optional return branch at node M, infinite when absent.
cplx return_branch_z(double f, const PortNetwork& port) {
    const cplx tank = parallel(inductor_z(f, port.return_l, port), capacitor_z(f, port.return_tank_c()));
    return capacitor_z(f, port.return_series_c()) + tank;
}

// Impedance seen from the port's z_ref side into the matching network, given
// the impedance presented by the ring at the network's ring node.
cplx port_input_impedance(double f, const PortNetwork& port, cplx z_ring) {
    switch (port.kind) {
    case PortKind::doubler_lc:
        if (port.has_return_branch()) z_ring = parallel(z_ring, return_branch_z(f, port));
        return inductor_z(f, port.l1, port) + capacitor_z(f, port.c1) + z_ring;
    case PortKind::divider_ll:
        return parallel(inductor_z(f, port.l3, port), inductor_z(f, port.l2, port) + z_ring);
    }
    return z_ring;
}

cplx reflection(cplx z, double z_ref) { return (z - z_ref) / (z + z_ref); }

// Driving-point impedance at port `i` of a 2x2 admittance matrix with the
// other port loaded by z_other.
cplx loaded_port_impedance(const std::array<std::array<cplx, 2>, 2>& y, int i, cplx z_other) {
    const int o = 1 - i;
    return 1.0 / (y[i][i] - y[i][o] * y[o][i] / (y[o][o] + 1.0 / z_other));
}

}  // namespace

TwoPortMatrix ring_loop_abcd(double f, const RingSpec& ring, int station) {
    const int n = ring.station_count();
    const TwoPortMatrix line = half_line(f, ring);
    const TwoPortMatrix shunt = TwoPortMatrix::shunt_admittance(varactor_admittance(f, ring.cell.varactor));
    TwoPortMatrix t = TwoPortMatrix::identity();
    for (int i = 0; i < n; ++i) {
        const int s = (station + i) % n;
        if (RingSpec::is_varactor_station(s)) t = t * shunt;
        t = t * line;
    }
    return t;
}

cplx ring_impedance_at(double f, const RingSpec& ring, int station) {
    return closed_loop_impedance(ring_loop_abcd(f, ring, station));
}

cplx ring_input_impedance(double f, const RingSpec& ring) {
    return ring_impedance_at(f, ring, ring.node_m);
}

std::array<std::array<cplx, 2>, 2> ring_port_admittance(double f, const RingSpec& ring) {
    std::array<std::array<cplx, 2>, 2> y{};
    for (const int step : {+1, -1}) {
        const TwoPortMatrix t = arc_abcd(f, ring, ring.node_m, ring.node_d, step);
        y[0][0] += t.d / t.b;
        y[0][1] += -t.det() / t.b;
        y[1][0] += -1.0 / t.b;
        y[1][1] += t.a / t.b;
    }
    const cplx y_var = varactor_admittance(f, ring.cell.varactor);
    if (RingSpec::is_varactor_station(ring.node_m)) y[0][0] += y_var;
    if (RingSpec::is_varactor_station(ring.node_d)) y[1][1] += y_var;
    return y;
}

std::vector<Resonance> find_resonances(const RingSpec& ring, double f_lo, double f_hi) {
    if (!(f_lo > 0.0 && f_lo < f_hi)) throw DomainError("find_resonances: need 0 < f_lo < f_hi");
    const double fc = cutoff_frequency(ring.cell);
    if (std::isfinite(fc) && f_hi >= 2.0 * fc) {
        throw DomainError("find_resonances: band must stay below twice the cutoff frequency");
    }
    // The Bloch impedance itself vanishes at the band edge; that is not a ring
    // resonance, so the scan stops just short of the cutoff.
    const double f_top = std::isfinite(fc) ? std::min(f_hi, fc * (1.0 - 1e-4)) : f_hi;
    std::vector<Resonance> out;
    if (f_top <= f_lo) return out;

    auto reactance = [&](double f) { return ring_input_impedance(f, ring).imag(); };
    auto susceptance = [&](double f) { return (1.0 / ring_input_impedance(f, ring)).imag(); };

    constexpr int kGrid = 2000;
    constexpr double kResolution = 100e3;
    double f_prev = f_lo;
    double x_prev = reactance(f_prev);
    for (int i = 1; i < kGrid; ++i) {
        const double f = f_lo + (f_top - f_lo) * i / (kGrid - 1);
        const double x = reactance(f);
        const bool rising = x_prev < 0.0 && x >= 0.0;
        const bool falling = x_prev > 0.0 && x <= 0.0;
        if (rising || falling) {
            const ResonanceKind kind = rising ? ResonanceKind::zero : ResonanceKind::pole;
            // Zeros: bisect Im Z. Poles: bisect Im Y, which is continuous there.
            auto g = [&](double ff) { return kind == ResonanceKind::zero ? reactance(ff) : -susceptance(ff); };
            double lo = f_prev, hi = f;
            const double g_lo_sign = g(lo) < 0.0 ? -1.0 : 1.0;
            while (hi - lo > kResolution) {
                const double mid = 0.5 * (lo + hi);
                if ((g(mid) < 0.0 ? -1.0 : 1.0) == g_lo_sign) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            const double fr = lo;  // ties resolve toward the lower frequency
            // A ring mode has N beta d = k pi with k < N. Near the band edge the
            // lossy Bloch impedance swings through zero as well (k = N); skip it.
            const double rhs = dispersion_rhs(fr, ring.cell.line, ring.cell.d,
                                              capacitance(0.0, ring.cell.varactor));
            const double theta = std::acos(std::clamp(rhs, -1.0, 1.0));
            if (std::lround(ring.n_cells * theta / constants::pi) >= ring.n_cells) {
                f_prev = f;
                x_prev = x;
                continue;
            }
            Resonance r{fr, kind, std::numeric_limits<double>::infinity()};
            const double df = std::max(kResolution, fr * 1e-5);
            if (kind == ResonanceKind::zero) {
                const double res = ring_input_impedance(fr, ring).real();
                const double slope = (reactance(fr + df) - reactance(fr - df)) / (2 * df);
                if (res > 0.0) r.q_estimate = fr * slope / (2.0 * res);
            } else {
                const double cond = (1.0 / ring_input_impedance(fr, ring)).real();
                const double slope = (susceptance(fr + df) - susceptance(fr - df)) / (2 * df);
                if (cond > 0.0) r.q_estimate = fr * slope / (2.0 * cond);
            }
            out.push_back(r);
        }
        f_prev = f;
        x_prev = x;
    }
    return out;
}

cplx port_load_impedance(double f, const PortNetwork& port) {
    switch (port.kind) {
    case PortKind::doubler_lc: {
        const cplx z = inductor_z(f, port.l1, port) + capacitor_z(f, port.c1) + port.z_ref;
        return port.has_return_branch() ? parallel(z, return_branch_z(f, port)) : z;
    }
    case PortKind::divider_ll:
        return inductor_z(f, port.l2, port) + parallel(inductor_z(f, port.l3, port), cplx{port.z_ref});
    }
    return port.z_ref;
}

PortReflection port_reflection(double f, const RingSpec& ring, const PortPair& ports) {
    if (!(f > 0.0)) throw DomainError("port_reflection: f must be > 0");
    const auto y = ring_port_admittance(f, ring);
    const cplx z_ring_d = loaded_port_impedance(y, 1, port_load_impedance(f, ports.doubler));
    const cplx z_ring_m = loaded_port_impedance(y, 0, port_load_impedance(f, ports.divider));
    return {reflection(port_input_impedance(f, ports.divider, z_ring_d), ports.divider.z_ref),
            reflection(port_input_impedance(f, ports.doubler, z_ring_m), ports.doubler.z_ref)};
}

}  // namespace ringwave
