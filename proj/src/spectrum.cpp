#include "ringwave/spectrum.hpp"
#include "ringwave/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace ringwave {

using constants::pi;

namespace {

// The FFTW planner is not re-entrant; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

constexpr int kLobe = 2;  // Hann main lobe half-width in bins

}  // namespace

double watts_to_dbm(double w) { return 10.0 * std::log10(std::max(w, 1e-300) / 1e-3); }
double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

std::optional<Tone> ToneSpectrum::tone_near(double f, double tol_hz) const {
    std::optional<Tone> best;
    for (const auto& t : tones) {
        if (std::abs(t.freq - f) <= tol_hz && (!best || std::abs(t.freq - f) < std::abs(best->freq - f))) best = t;
    }
    return best;
}

double ToneSpectrum::power_at(double f) const {
    if (bin_power_w.empty() || resolution_hz <= 0.0) return watts_to_dbm(0.0);
    const long bins = static_cast<long>(bin_power_w.size());
    const long k = std::lround(f / resolution_hz);
    double p = 0.0;
    for (long j = std::max(0L, k - kLobe); j <= std::min(bins - 1, k + kLobe); ++j) p += bin_power_w[j];
    return watts_to_dbm(p);
}

ToneSpectrum spectrum_of(const std::vector<double>& samples, double dt, double z_ref, double f_common,
                         const SpectrumOptions& options) {
    if (!(dt > 0.0) || !(z_ref > 0.0) || !(f_common > 0.0)) {
        throw DomainError("spectrum: dt, z_ref and f_common must be > 0");
    }
    std::size_t begin = options.discard_first_half ? samples.size() / 2 : 0;
    const double available = static_cast<double>(samples.size() - begin);
    const double period = 1.0 / (f_common * dt);  // samples per period
    const auto periods = static_cast<long long>(std::floor(available / period + 1e-9));
    if (periods < 8) throw DomainError("spectrum: analysis window shorter than 8 periods of f_common");
    const auto n = static_cast<std::size_t>(std::llround(static_cast<double>(periods) * period));
    begin = samples.size() - n;  // keep the most recent part of the record

    std::vector<double> in(n);
    double sum_w2 = 0.0;
    double mean_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(i) / static_cast<double>(n));
        const double x = samples[begin + i];
        in[i] = x * w;
        sum_w2 += w * w;
        mean_sq += x * x;
    }
    mean_sq /= static_cast<double>(n);

    const std::size_t bins = n / 2 + 1;
    fftw_complex* out = fftw_alloc_complex(bins);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out, FFTW_ESTIMATE);
    }
    fftw_execute(plan);

    ToneSpectrum sp;
    sp.resolution_hz = 1.0 / (static_cast<double>(n) * dt);
    sp.bin_power_w.resize(bins);
    std::vector<double> phase(bins);
    const double norm = static_cast<double>(n) * sum_w2 * z_ref;
    for (std::size_t k = 0; k < bins; ++k) {
        const double mag2 = out[k][0] * out[k][0] + out[k][1] * out[k][1];
        // One-sided: DC and Nyquist are not doubled.
        const bool edge = k == 0 || (n % 2 == 0 && k == bins - 1);
        sp.bin_power_w[k] = (edge ? 1.0 : 2.0) * mag2 / norm;
        phase[k] = std::atan2(out[k][1], out[k][0]);
    }
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
        fftw_free(out);
    }

    std::vector<double> sorted = sp.bin_power_w;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(bins / 2), sorted.end());
    sp.noise_floor_dbm = std::max(options.floor_dbm, watts_to_dbm(sorted[bins / 2]));
    const double floor_w = dbm_to_watts(sp.noise_floor_dbm);
    const double contrast = std::pow(10.0, options.peak_contrast_db / 10.0);

    double tone_w = 0.0;
    for (std::size_t k = 1; k + 1 < bins; ++k) {
        const double p = sp.bin_power_w[k];
        if (p < sp.bin_power_w[k - 1] || p <= sp.bin_power_w[k + 1]) continue;
        const double left = k >= 3 ? sp.bin_power_w[k - 3] : 0.0;
        const double right = k + 3 < bins ? sp.bin_power_w[k + 3] : 0.0;
        if (p < contrast * left || p < contrast * right) continue;
        double lobe = 0.0;
        for (std::size_t j = k - std::min<std::size_t>(k, kLobe); j <= std::min(bins - 1, k + kLobe); ++j) {
            lobe += sp.bin_power_w[j];
        }
        if (lobe <= floor_w) continue;
        tone_w += lobe;
        sp.tones.push_back({static_cast<double>(k) * sp.resolution_hz, watts_to_dbm(lobe), phase[k]});
    }
    double all_w = 0.0;
    for (double p : sp.bin_power_w) all_w += p;
    sp.total_power_dbm = watts_to_dbm(mean_sq / z_ref);
    sp.residual_power_dbm = watts_to_dbm(std::max(0.0, all_w - tone_w));
    return sp;
}

ToneSpectrum spectrum(const TimeSeries& ts, int node, double z_ref, double f_common,
                      const SpectrumOptions& options) {
    return spectrum_of(ts.voltage(node), ts.dt, z_ref, f_common, options);
}

}  // namespace ringwave
