#pragma once

// Driven transient experiments on the ring: single operating points, power
// sweeps for the divider and doubler, and input-frequency responses.

#include "ringwave/coupler.hpp"
#include "ringwave/network.hpp"
#include "ringwave/spectrum.hpp"

#include <optional>
#include <vector>

namespace ringwave {

struct SimSettings {
    int steps_per_cycle = 64;     // per period of the fastest tone of interest
    int cycles = 1000;            // input-tone periods simulated; the first half is discarded
    double seed_voltage = 1e-6;   // initial perturbation on node D (V)
    int segments_per_half_cell = 2;
    double newton_tol = 1e-9;
    double floor_dbm = -120.0;
    double detect_margin_db = 20.0;  // target tone must clear the floor by this much
    double source_resistance = 0.0;  // 0 uses the driven port's z_ref
    bool lossless = false;
    int threads = 1;
};

struct OperatingPoint {
    double f_in = 0.0;
    double p_in_dbm = 0.0;        // available source power
    double f_out = 0.0;           // f_in / 2 (divider) or 2 f_in (doubler)
    double p_out_dbm = 0.0;       // target tone at the output port
    double p_feedthrough_dbm = 0.0;  // input tone at the output port
    double noise_floor_dbm = 0.0;
    bool detected = false;        // target tone clears floor + detect_margin_db
};

/// Available power (dBm) to EMF amplitude of a source with resistance r.
double source_amplitude(double p_dbm, double r);

/// One driven run. Divider mode drives port M and reads f_in/2 at port D;
/// doubler mode drives port D and reads 2 f_in at port M. When `waveform` is
/// given it receives the recorded second half of the run (output and input
/// port nodes).
OperatingPoint run_point(const RingSpec& ring, const PortPair& ports, DriveMode mode, double f_in,
                         double p_in_dbm, const SimSettings& settings,
                         TimeSeries* waveform = nullptr);

struct SweepResult {
    std::vector<OperatingPoint> points;  // ascending input power
    std::optional<double> p_th_dbm;      // divider: midpoint of the bracketing pair
    double p_th_uncertainty_db = 0.0;
    double p_sat_dbm = 0.0;              // largest output over the sweep
    /// Doubler: p_in - p_out per point (NaN where the tone is below floor).
    std::vector<double> conversion_loss_db;
};

/// Input powers p_lo, p_lo + step, ..., <= p_hi + 1e-9.
std::vector<double> power_grid(double p_lo, double p_hi, double step);

SweepResult divider_sweep(const RingSpec& ring, const PortPair& ports, double f_in,
                          const std::vector<double>& p_in_dbm, const SimSettings& settings);

SweepResult doubler_sweep(const RingSpec& ring, const PortPair& ports, double f_in,
                          const std::vector<double>& p_in_dbm, const SimSettings& settings);

/// Least-squares slope of p_out against p_in over points with p_in in [lo, hi]
/// whose target tone was detected. NaN with fewer than two such points.
double output_slope(const SweepResult& sweep, double lo, double hi);

struct FrequencyResponse {
    std::vector<OperatingPoint> points;  // ascending input frequency
    double bandwidth_hz = 0.0;
    double f_peak = 0.0;
    double p_peak_dbm = 0.0;
};

/// Sweeps the input frequency over f_center +- span/2 with `points` samples.
/// Bandwidth is the contiguous span around the peak where the output stays
/// within 3 dB of it (divider: where the oscillation is detected). A zero
/// span gives one point and zero bandwidth.
FrequencyResponse frequency_response(const RingSpec& ring, const PortPair& ports, DriveMode mode,
                                     double p_in_dbm, double f_center, double span, int points,
                                     const SimSettings& settings);

}  // namespace ringwave
