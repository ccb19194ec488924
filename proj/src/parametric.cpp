#include "ringwave/parametric.hpp"
#include "ringwave/dispersion.hpp"
#include "ringwave/errors.hpp"

#include <cmath>
#include <limits>

namespace ringwave {

using constants::two_pi;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// sin(x)/x with its series near the origin.
double sinc(double x) {
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

double node_cosine(int n, const PumpState& pump) {
    if (n < 1) throw DomainError("node index is 1-based");
    return std::abs(std::cos(0.5 * (2 * n - 1) * pump.beta2_d));
}

}  // namespace

PumpState make_pump_state(const RingSpec& ring, double v_p0, double f_pump) {
    if (!(f_pump > 0.0)) throw DomainError("pump frequency must be > 0");
    if (!(v_p0 >= 0.0)) throw DomainError("pump amplitude must be >= 0");
    return {v_p0, f_pump, loaded_phase(f_pump, ring.cell).beta_d};
}

EffectiveElements effective_elements(const TaylorCoeffs& tc, double v_p, double f_signal) {
    if (!(v_p >= 0.0)) throw DomainError("effective_elements: v_p must be >= 0");
    if (!(f_signal > 0.0)) throw DomainError("effective_elements: f_signal must be > 0");
    EffectiveElements out;
    out.c_e = tc.c0 + 0.5 * tc.c2 * v_p * v_p;
    const double g = two_pi * f_signal * std::abs(tc.c1) * v_p;
    out.r_e = g > 0.0 ? -2.0 / g : kNegInf;
    return out;
}

double node_pump_amplitude(int n, const PumpState& pump) {
    return 2.0 * pump.v_p0 * node_cosine(n, pump);
}

double node_negative_resistance(int n, const PumpState& pump, const TaylorCoeffs& tc) {
    const double omega = two_pi * 0.5 * pump.f_pump;
    const double g = omega * std::abs(tc.c1) * pump.v_p0 * node_cosine(n, pump);
    if (!(g > 1e-300)) return kNegInf;
    return -1.0 / g;
}

cplx nltl_harmonic_amplitude(int n, double v_s, const NltlSpec& spec) {
    if (n < 0) throw DomainError("nltl_harmonic_amplitude: n must be >= 0");
    if (n == 0) return 0.0;
    // (beta2_d / dbd) sin(dbd n / 2) written through sinc so dbd -> 0 is smooth.
    const double half_arg = 0.5 * spec.delta_beta_d() * n;
    const double growth = spec.beta2_d * 0.5 * n * sinc(half_arg);
    const cplx propagation = std::exp(cplx{-spec.alpha2_d * n, -spec.beta2_d * n});
    return spec.k_nl * v_s * v_s * cplx{0.0, growth} * propagation;
}

int optimal_stage_count(const NltlSpec& spec, int n_max) {
    if (n_max < 1) throw DomainError("optimal_stage_count: n_max must be >= 1");
    int best = 1;
    double best_amp = std::abs(nltl_harmonic_amplitude(1, 1.0, spec));
    for (int n = 2; n <= n_max; ++n) {
        const double amp = std::abs(nltl_harmonic_amplitude(n, 1.0, spec));
        // Relative margin so rounding cannot break a tie toward the larger n.
        if (amp > best_amp * (1.0 + 1e-12)) {
            best_amp = amp;
            best = n;
        }
    }
    return best;
}

double pump_profile_at(double x, const PumpState& pump, double d) {
    return 2.0 * pump.v_p0 * std::abs(std::cos(pump.beta2_d / d * x));
}

StandingWaveProfile standing_wave_profile(Mode mode, const RingSpec& ring,
                                          const PumpState& pump, int x_points) {
    if (x_points < 8) throw DomainError("standing_wave_profile: need at least 8 points");
    const double d = ring.cell.d;
    const double half_length = 0.5 * ring.n_cells * d;
    StandingWaveProfile out;
    out.beta2_d = pump.beta2_d;
    out.beta1_d = loaded_phase(0.5 * pump.f_pump, ring.cell).beta_d;
    PumpState shape = pump;
    if (mode == Mode::doubler) shape.v_p0 = 1.0;

    out.x.reserve(x_points);
    out.tone_f.reserve(x_points);
    out.tone_2f.reserve(x_points);
    for (int i = 0; i < x_points; ++i) {
        // Mirror-exact grid: sample i and x_points-1-i are negatives of each other.
        const double x = half_length * (2.0 * i - (x_points - 1)) / (x_points - 1);
        out.x.push_back(x);
        out.tone_f.push_back(std::abs(std::sin(out.beta1_d / d * x)));
        out.tone_2f.push_back(pump_profile_at(x, shape, d));
    }
    return out;
}

}  // namespace ringwave
