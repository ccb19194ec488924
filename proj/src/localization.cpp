#include "ringwave/localization.hpp"
#include "ringwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace ringwave {

using constants::c_light;
using constants::pi;
using constants::two_pi;

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double wrap(double a) {
    a = std::remainder(a, two_pi);  // [-pi, pi]
    return a <= -pi ? a + two_pi : a;
}

}  // namespace

void MultipathChannel::validate() const {
    if (paths.empty()) throw DomainError("channel needs at least the line-of-sight path");
    const double los = paths.front().delay;
    if (!(los >= 0.0)) throw DomainError("line-of-sight delay must be >= 0");
    for (const auto& p : paths) {
        if (!(p.delay >= los)) throw DomainError("path delays must not precede line of sight");
    }
}

MultipathChannel los_channel(double distance) {
    return {{{distance / c_light, cplx{1.0}}}};
}

cplx channel_response(const MultipathChannel& ch, double f) {
    cplx h{0.0};
    for (const auto& p : ch.paths) h += p.gain * std::polar(1.0, -two_pi * f * p.delay);
    return h;
}

double phase_error(const MultipathChannel& ch, double f) {
    ch.validate();
    if (!(f > 0.0)) throw DomainError("phase_error: f must be > 0");
    const cplx h = channel_response(ch, f);
    // Remove the LOS phase before taking the argument to avoid large-angle loss.
    const cplx rel = h * std::polar(1.0, two_pi * f * ch.paths.front().delay);
    if (std::abs(rel) <= 1e-300) throw DomainError("phase_error: |H| = 0, phase undefined");
    return wrap(std::arg(rel));
}

double round_trip_phase_error(const MultipathChannel& up, const MultipathChannel& down,
                              const FrequencyPlan& plan) {
    return wrap(phase_error(up, plan.f_up) + phase_error(down, plan.f_down));
}

SubstreamRng::SubstreamRng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream)
    : state_(splitmix(splitmix(splitmix(seed) ^ trial) ^ (stream + 0x5bd1e995ULL))) {}

std::uint64_t SubstreamRng::next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SubstreamRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

MultipathChannel random_channel(SubstreamRng& rng, int n_paths, const ChannelModel& model) {
    if (n_paths < 0) throw DomainError("random_channel: n_paths must be >= 0");
    MultipathChannel ch = los_channel(model.distance);
    const double tau0 = ch.paths.front().delay;
    for (int k = 0; k < n_paths; ++k) {
        const double excess = (1.0 - rng.uniform()) * model.max_excess_delay;  // (0, max]
        const double mag = rng.uniform() * model.max_gain;
        const double phase = rng.uniform() * two_pi;
        ch.paths.push_back({tau0 + excess, std::polar(mag, phase)});
    }
    return ch;
}

double scheme_phase_error(SchemeKind kind, double f_base, const MultipathChannel& up,
                          const MultipathChannel& down) {
    const double a = round_trip_phase_error(up, down, {f_base, 2.0 * f_base});
    if (kind == SchemeKind::single_band) return a;
    const double b = round_trip_phase_error(up, down, {2.0 * f_base, f_base});
    return 0.5 * (a + b);
}

VarianceResult monte_carlo_variance(double f_base, int n_paths, int trials, std::uint64_t seed,
                                    const ChannelModel& model, int threads) {
    if (!(f_base > 0.0)) throw DomainError("monte_carlo_variance: f_base must be > 0");
    if (trials < 1000) throw DomainError("monte_carlo_variance: need at least 1000 trials");
    if (n_paths < 0) throw DomainError("monte_carlo_variance: n_paths must be >= 0");
    std::vector<double> single(trials), dual(trials);
    auto work = [&](int begin, int end) {
        for (int t = begin; t < end; ++t) {
            SubstreamRng rng_up(seed, static_cast<std::uint64_t>(t), 0);
            SubstreamRng rng_down(seed, static_cast<std::uint64_t>(t), 1);
            const auto up = random_channel(rng_up, n_paths, model);
            const auto down = random_channel(rng_down, n_paths, model);
            single[t] = scheme_phase_error(SchemeKind::single_band, f_base, up, down);
            dual[t] = scheme_phase_error(SchemeKind::dual_band, f_base, up, down);
        }
    };
    threads = std::clamp(threads, 1, 64);
    if (threads == 1) {
        work(0, trials);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (trials + threads - 1) / threads;
        for (int i = 0; i < threads; ++i) {
            const int b = i * chunk, e = std::min(trials, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }
    // Serial two-pass reduction keeps the result independent of thread count.
    auto variance = [](const std::vector<double>& x) {
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= static_cast<double>(x.size());
        double ss = 0.0;
        for (double v : x) ss += (v - mean) * (v - mean);
        return ss / static_cast<double>(x.size() - 1);
    };
    return {variance(single), variance(dual)};
}

LinkRange link_range(double p_tx_dbm, double g_tx_dbi, double g_rx_dbi, double f,
                     double sensitivity_dbm) {
    if (!(f > 0.0)) throw DomainError("link_range: f must be > 0");
    if (!(p_tx_dbm > sensitivity_dbm)) return {0.0, false};
    const double margin = p_tx_dbm + g_tx_dbi + g_rx_dbi - sensitivity_dbm;
    return {c_light / (4.0 * pi * f) * std::pow(10.0, margin / 20.0), true};
}

}  // namespace ringwave
