#pragma once

// Tone extraction from a recorded waveform: Hann-windowed DFT over an
// integer number of periods, tone powers in dBm into a reference impedance.

#include "ringwave/transient.hpp"

#include <optional>
#include <vector>

namespace ringwave {

struct Tone {
    double freq = 0.0;       // Hz
    double power_dbm = 0.0;  // into z_ref
    double phase = 0.0;      // rad, relative to the window start
};

struct ToneSpectrum {
    std::vector<Tone> tones;  // sorted by frequency
    double noise_floor_dbm = 0.0;
    double total_power_dbm = 0.0;     // time-domain mean power over the window
    double residual_power_dbm = 0.0;  // windowed power outside the reported tones
    double resolution_hz = 0.0;
    std::vector<double> bin_power_w;  // per-bin power estimate (W)

    /// Reported tone closest to f within tol_hz, if any.
    std::optional<Tone> tone_near(double f, double tol_hz) const;
    /// Main-lobe power at f in dBm whether or not it clears the floor.
    double power_at(double f) const;
};

struct SpectrumOptions {
    /// Absolute floor (dBm); the reported floor is the larger of this and the median bin.
    double floor_dbm = -120.0;
    /// A peak must exceed the bins three away on either side by this much (dB).
    double peak_contrast_db = 20.0;
    /// Drop the first half of the record as start-up transient.
    bool discard_first_half = true;
};

/// Spectrum of `samples` (uniform spacing dt) as seen across z_ref.
/// The analysis window is the largest whole number of periods of f_common
/// that fits; fewer than 8 periods is a DomainError.
ToneSpectrum spectrum_of(const std::vector<double>& samples, double dt, double z_ref, double f_common,
                         const SpectrumOptions& options = {});

/// spectrum_of applied to one recorded node of a TimeSeries.
ToneSpectrum spectrum(const TimeSeries& ts, int node, double z_ref, double f_common,
                      const SpectrumOptions& options = {});

double watts_to_dbm(double w);
double dbm_to_watts(double dbm);

}  // namespace ringwave
