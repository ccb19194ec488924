#include "ringwave/dispersion.hpp"
#include "ringwave/errors.hpp"

#include <cmath>
#include <limits>

namespace ringwave {

using constants::c_light;
using constants::pi;
using constants::two_pi;

double unloaded_phase(double f, const LineSpec& line, double d) {
    return two_pi * f * std::sqrt(line.eps_eff) / c_light * d;
}

double dispersion_rhs(double f, const LineSpec& line, double d, double c_shunt) {
    const double kd = unloaded_phase(f, line, d);
    return std::cos(kd) - pi * f * c_shunt * line.z0 * std::sin(kd);
}

cplx varactor_admittance(double f, const Varactor& var) {
    const double c = capacitance(0.0, var);
    const cplx y_junction{0.0, two_pi * f * c};
    if (var.r_s == 0.0) return y_junction;
    if (f == 0.0) return 0.0;
    return 1.0 / (var.r_s + 1.0 / y_junction);
}

TwoPortMatrix line_section_abcd(double f, const LineSpec& line, double length) {
    const cplx gamma_l{line.alpha_at(f) * length, unloaded_phase(f, line, length)};
    return TwoPortMatrix::line(line.z0, gamma_l);
}

TwoPortMatrix unit_cell_abcd(double f, const UnitCell& cell) {
    const TwoPortMatrix half = line_section_abcd(f, cell.line, 0.5 * cell.d);
    return half * TwoPortMatrix::shunt_admittance(varactor_admittance(f, cell.varactor)) * half;
}

LoadedPhase loaded_phase(double f, const UnitCell& cell) {
    const cplx a = unit_cell_abcd(f, cell).a;
    const cplx gamma_d = std::acos(a);
    LoadedPhase out;
    out.beta_d = std::abs(gamma_d.real());
    out.alpha_d = std::abs(gamma_d.imag());
    const double rhs = dispersion_rhs(f, cell.line, cell.d, capacitance(0.0, cell.varactor));
    out.evanescent = std::abs(rhs) > 1.0;
    return out;
}

double cutoff_frequency(const UnitCell& cell) {
    const double c_shunt = cell.varactor.c0 > 0.0 ? capacitance(0.0, cell.varactor) : 0.0;
    if (c_shunt == 0.0) return std::numeric_limits<double>::infinity();

    // For c_shunt > 0 the crossing of -1 always precedes kd = pi.
    const double f_kd_pi = c_light / (2.0 * std::sqrt(cell.line.eps_eff) * cell.d);
    const double step = f_kd_pi / 2000.0;
    double lo = 0.0;
    double hi = step;
    while (dispersion_rhs(hi, cell.line, cell.d, c_shunt) > -1.0) {
        lo = hi;
        hi += step;
        if (hi >= f_kd_pi) {
            hi = f_kd_pi;
            break;
        }
    }
    while (hi - lo > 1e3) {
        const double mid = 0.5 * (lo + hi);
        if (dispersion_rhs(mid, cell.line, cell.d, c_shunt) > -1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace ringwave
