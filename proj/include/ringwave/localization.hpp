#pragma once

// Phase-of-arrival ranging under multipath: channel model, per-band phase
// error, round-trip composition and the single- vs dual-band Monte Carlo.

#include "ringwave/core.hpp"

#include <cstdint>
#include <vector>

namespace ringwave {

struct Path {
    double delay = 0.0;  // s
    cplx gain{1.0};
};

/// Tapped-delay channel. paths[0] is line of sight.
struct MultipathChannel {
    std::vector<Path> paths;

    void validate() const;
};

/// Line-of-sight-only channel over `distance` metres.
MultipathChannel los_channel(double distance);

/// H(f) = sum_k g_k exp(-j 2 pi f tau_k).
cplx channel_response(const MultipathChannel& ch, double f);

/// arg H(f) minus the line-of-sight phase, wrapped to (-pi, pi].
/// DomainError when |H(f)| vanishes.
double phase_error(const MultipathChannel& ch, double f);

struct FrequencyPlan {
    double f_up = 0.0;
    double f_down = 0.0;
};

/// phase_error on the uplink plus phase_error on the downlink, wrapped.
double round_trip_phase_error(const MultipathChannel& up, const MultipathChannel& down,
                              const FrequencyPlan& plan);

enum class SchemeKind { single_band, dual_band };

struct ChannelModel {
    double distance = 2.0;           // m
    double max_excess_delay = 20e-9; // s
    double max_gain = 0.4;
};

/// Counter-based generator: SplitMix64 over (seed, trial, stream, draw).
/// Every trial owns an independent substream, so results do not depend on
/// evaluation order or thread count.
class SubstreamRng {
public:
    SubstreamRng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream);
    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

private:
    std::uint64_t state_;
};

/// Random channel: LOS at model.distance plus n_paths reflectors with excess
/// delay U(0, max], gain magnitude U[0, max_gain], phase U[0, 2 pi).
/// Reflector k consumes the same draws regardless of n_paths, so a channel
/// with n + 1 paths extends the one with n paths.
MultipathChannel random_channel(SubstreamRng& rng, int n_paths, const ChannelModel& model);

/// Round-trip phase error of one scheme on one (up, down) channel pair.
/// Dual band averages plan A (f up, 2f down) and plan B (2f up, f down).
double scheme_phase_error(SchemeKind kind, double f_base, const MultipathChannel& up,
                          const MultipathChannel& down);

struct VarianceResult {
    double single_band = 0.0;  // rad^2
    double dual_band = 0.0;    // rad^2
};

/// Sample variance of the round-trip phase error over `trials` random channel
/// pairs (trials >= 1000). Deterministic for a given seed and any thread count.
VarianceResult monte_carlo_variance(double f_base, int n_paths, int trials, std::uint64_t seed,
                                    const ChannelModel& model = {}, int threads = 1);

struct LinkRange {
    double meters = 0.0;
    bool in_range = false;  // false when p_tx <= sensitivity
};

/// Friis free-space range for the given budget.
LinkRange link_range(double p_tx_dbm, double g_tx_dbi, double g_rx_dbi, double f,
                     double sensitivity_dbm);

}  // namespace ringwave
