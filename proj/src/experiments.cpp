#include "ringwave/experiments.hpp"
#include "ringwave/errors.hpp"
#include "ringwave/transient.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <utility>

namespace ringwave {

namespace {

// Runs f(i) for i in [0, count) on up to `threads` workers. Results are written
// by index, so the outcome does not depend on scheduling.
template <typename F>
void parallel_for(int count, int threads, F&& f) {
    threads = std::clamp(threads, 1, std::max(1, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

SweepResult sweep(const RingSpec& ring, const PortPair& ports, DriveMode mode, double f_in,
                  const std::vector<double>& p_in, const SimSettings& settings) {
    std::vector<double> grid = p_in;
    std::sort(grid.begin(), grid.end());
    SweepResult out;
    out.points.resize(grid.size());
    parallel_for(static_cast<int>(grid.size()), settings.threads, [&](int i) {
        out.points[i] = run_point(ring, ports, mode, f_in, grid[i], settings);
    });
    out.p_sat_dbm = -std::numeric_limits<double>::infinity();
    for (const auto& p : out.points) {
        if (p.detected) out.p_sat_dbm = std::max(out.p_sat_dbm, p.p_out_dbm);
        out.conversion_loss_db.push_back(p.detected ? p.p_in_dbm - p.p_out_dbm
                                                    : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

}  // namespace

double source_amplitude(double p_dbm, double r) {
    return std::sqrt(8.0 * r * dbm_to_watts(p_dbm));
}

OperatingPoint run_point(const RingSpec& ring, const PortPair& ports, DriveMode mode, double f_in,
                         double p_in_dbm, const SimSettings& settings, TimeSeries* waveform) {
    if (!(f_in > 0.0)) throw DomainError("run_point: f_in must be > 0");
    if (settings.steps_per_cycle < 64) throw DomainError("run_point: need at least 64 steps per cycle");
    if (settings.cycles < 200) throw DomainError("run_point: need at least 200 input cycles");

    const bool divider = mode == DriveMode::divider;
    const PortNetwork& driven = divider ? ports.doubler : ports.divider;
    const double r_source = settings.source_resistance > 0.0 ? settings.source_resistance : driven.z_ref;

    NetworkOptions nopt;
    nopt.segments_per_half_cell = settings.segments_per_half_cell;
    nopt.lossless = settings.lossless;
    nopt.source_amplitude = source_amplitude(p_in_dbm, r_source);
    nopt.source_freq = f_in;
    nopt.source_resistance = r_source;
    const CircuitNetwork net = build_nrr_network(ring, ports, mode, nopt);

    const double f_out = divider ? 0.5 * f_in : 2.0 * f_in;
    const double f_fast = std::max(f_in, f_out);
    const double f_common = std::min(f_in, f_out);
    const double dt = 1.0 / (settings.steps_per_cycle * f_fast);
    const double t_end = settings.cycles / f_in;

    const NetworkPort& out_port = net.port("out");
    TransientOptions topt;
    topt.record_nodes = {out_port.node};
    if (waveform != nullptr) topt.record_nodes.push_back(net.port("in").node);
    topt.record_from = 0.5 * t_end - 2.0 * dt;
    topt.newton_rel_tol = settings.newton_tol;
    topt.initial_voltages = {{net.node("st" + std::to_string(ring.node_d)), settings.seed_voltage}};
    TimeSeries ts = transient_run(net, t_end, dt, topt);

    SpectrumOptions sopt;
    sopt.floor_dbm = settings.floor_dbm;
    sopt.discard_first_half = false;
    const ToneSpectrum sp = spectrum(ts, out_port.node, out_port.z_ref, f_common, sopt);

    OperatingPoint op;
    op.f_in = f_in;
    op.p_in_dbm = p_in_dbm;
    op.f_out = f_out;
    op.p_out_dbm = sp.power_at(f_out);
    op.p_feedthrough_dbm = sp.power_at(f_in);
    op.noise_floor_dbm = sp.noise_floor_dbm;
    op.detected = op.p_out_dbm > sp.noise_floor_dbm + settings.detect_margin_db;
    if (waveform != nullptr) *waveform = std::move(ts);
    return op;
}

std::vector<double> power_grid(double p_lo, double p_hi, double step) {
    if (!(step > 0.0) || !(p_hi >= p_lo)) throw DomainError("power_grid: need step > 0 and p_hi >= p_lo");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double p = p_lo + i * step;
        if (p > p_hi + 1e-9) break;
        grid.push_back(p);
    }
    return grid;
}

SweepResult divider_sweep(const RingSpec& ring, const PortPair& ports, double f_in,
                          const std::vector<double>& p_in_dbm, const SimSettings& settings) {
    SweepResult out = sweep(ring, ports, DriveMode::divider, f_in, p_in_dbm, settings);
    // Threshold: first detected point whose predecessor was not detected.
    for (std::size_t i = 1; i < out.points.size(); ++i) {
        if (out.points[i].detected && !out.points[i - 1].detected) {
            out.p_th_dbm = 0.5 * (out.points[i].p_in_dbm + out.points[i - 1].p_in_dbm);
            out.p_th_uncertainty_db = out.points[i].p_in_dbm - out.points[i - 1].p_in_dbm;
            break;
        }
    }
    return out;
}

SweepResult doubler_sweep(const RingSpec& ring, const PortPair& ports, double f_in,
                          const std::vector<double>& p_in_dbm, const SimSettings& settings) {
    return sweep(ring, ports, DriveMode::doubler, f_in, p_in_dbm, settings);
}

double output_slope(const SweepResult& sweep, double lo, double hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& p : sweep.points) {
        if (!p.detected || p.p_in_dbm < lo - 1e-9 || p.p_in_dbm > hi + 1e-9) continue;
        sx += p.p_in_dbm;
        sy += p.p_out_dbm;
        sxx += p.p_in_dbm * p.p_in_dbm;
        sxy += p.p_in_dbm * p.p_out_dbm;
        ++n;
    }
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

FrequencyResponse frequency_response(const RingSpec& ring, const PortPair& ports, DriveMode mode,
                                     double p_in_dbm, double f_center, double span, int points,
                                     const SimSettings& settings) {
    if (!(f_center > 0.0) || !(span >= 0.0)) throw DomainError("frequency_response: need f_center > 0, span >= 0");
    if (span > 0.0 && points < 11) throw DomainError("frequency_response: need at least 11 points");
    if (!(f_center - 0.5 * span > 0.0)) throw DomainError("frequency_response: span reaches 0 Hz");
    const int count = span > 0.0 ? points : 1;
    const double step = count > 1 ? span / (count - 1) : 0.0;

    FrequencyResponse fr;
    fr.points.resize(count);
    parallel_for(count, settings.threads, [&](int i) {
        const double f = f_center - 0.5 * span + i * step;
        fr.points[i] = run_point(ring, ports, mode, f, p_in_dbm, settings);
    });

    std::size_t peak = 0;
    for (std::size_t i = 1; i < fr.points.size(); ++i) {
        if (fr.points[i].p_out_dbm > fr.points[peak].p_out_dbm) peak = i;
    }
    fr.f_peak = fr.points[peak].f_in;
    fr.p_peak_dbm = fr.points[peak].p_out_dbm;
    if (count == 1) return fr;

    const bool divider = mode == DriveMode::divider;
    auto inside = [&](std::size_t i) {
        return divider ? fr.points[i].detected : fr.points[i].p_out_dbm >= fr.p_peak_dbm - 3.0;
    };
    if (!inside(peak)) return fr;
    std::size_t lo = peak, hi = peak;
    while (lo > 0 && inside(lo - 1)) --lo;
    while (hi + 1 < fr.points.size() && inside(hi + 1)) ++hi;
    fr.bandwidth_hz = static_cast<double>(hi - lo + 1) * step;
    return fr;
}

}  // namespace ringwave
