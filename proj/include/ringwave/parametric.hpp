#pragma once

// Closed-form parametric theory of the pumped varactor ring: effective
// elements under pump, standing-wave node swings, per-node negative
// resistance and second-harmonic growth along a dispersive NLTL.

#include "ringwave/core.hpp"

#include <vector>

namespace ringwave {

struct PumpState {
    double v_p0 = 0.0;     // pump amplitude at node M (V)
    double f_pump = 4.8e9; // Hz
    double beta2_d = 0.0;  // loaded phase per cell at f_pump (rad)
};

/// Builds a PumpState whose beta2_d comes from the ring's dispersion at f_pump.
PumpState make_pump_state(const RingSpec& ring, double v_p0, double f_pump);

struct NltlSpec {
    double beta1_d = 0.0;
    double beta2_d = 0.0;
    double alpha2_d = 0.0;
    double k_nl = 0.5;  // 1/V
    double d = 4e-3;

    double delta_beta_d() const { return beta2_d - 2.0 * beta1_d; }
};

/// Varactor under a pump of amplitude v_p seen at the subharmonic f_signal:
/// a capacitor c_e in parallel with a negative resistor r_e.
struct EffectiveElements {
    double c_e = 0.0;  // F
    double r_e = 0.0;  // ohm, <= 0; -infinity when unpumped
};

EffectiveElements effective_elements(const TaylorCoeffs& tc, double v_p, double f_signal);

/// Pump swing at varactor node n (1-based): 2 v_p0 |cos((2n-1)/2 beta2_d)|.
double node_pump_amplitude(int n, const PumpState& pump);

/// Negative resistance of the diode at node n, evaluated at the subharmonic
/// f_pump / 2. -infinity at a standing-wave null.
double node_negative_resistance(int n, const PumpState& pump, const TaylorCoeffs& tc);

/// Second-harmonic phasor after n stages driven by v_s at the fundamental:
/// k_nl v_s^2 (j beta2_d / dbd) sin(dbd n / 2) exp(-(alpha2_d + j beta2_d) n),
/// dbd = beta2_d - 2 beta1_d, continuous through dbd = 0.
cplx nltl_harmonic_amplitude(int n, double v_s, const NltlSpec& spec);

/// argmax over n in [1, n_max] of |nltl_harmonic_amplitude(n, 1, spec)|,
/// ties toward the smaller n.
int optimal_stage_count(const NltlSpec& spec, int n_max);

enum class Mode { divider, doubler };

struct StandingWaveProfile {
    std::vector<double> x;        // ring coordinate from node M (m), symmetric about 0
    std::vector<double> tone_f;   // subharmonic |sin(beta1 x)|, zero at M
    std::vector<double> tone_2f;  // 2 v_p0 |cos(beta2 x)|
    double beta1_d = 0.0;
    double beta2_d = 0.0;
};

/// Magnitude profiles of the f and 2f standing waves along the ring, sampled
/// at x_points >= 8 positions over [-N d / 2, N d / 2]. In doubler mode the
/// 2f wave is normalised with v_p0 = 1 (the k' factor is left out).
StandingWaveProfile standing_wave_profile(Mode mode, const RingSpec& ring,
                                          const PumpState& pump, int x_points);

/// Evaluates the 2f profile at an arbitrary coordinate (used for node sampling).
double pump_profile_at(double x, const PumpState& pump, double d);

}  // namespace ringwave
