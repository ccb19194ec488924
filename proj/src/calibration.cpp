#include "ringwave/calibration.hpp"
#include "ringwave/dispersion.hpp"
#include "ringwave/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

namespace ringwave {

using constants::c_light;
using constants::pi;
using constants::two_pi;

namespace {

struct Residuals {
    double phase = 0.0;   // relative error of beta*d at the phase anchor
    double cutoff = 0.0;  // dispersion rhs + 1 at the cutoff anchor

    double norm() const { return std::hypot(phase, cutoff); }
};

Residuals residuals(const CalibrationAnchors& a, double c0, double d, double z0, double eps) {
    const LineSpec line{z0, eps};
    const double rhs = dispersion_rhs(a.f_beta, line, d, c0);
    // acos on the complex plane keeps the residual defined in the stop band.
    const double beta_d = std::acos(cplx{rhs, 0.0}).real();
    return {(beta_d - a.beta_d) / a.beta_d, dispersion_rhs(a.f_cutoff, line, d, c0) + 1.0};
}

// z0 that places the cutoff exactly at f_cutoff for a given eps_eff, if any.
std::optional<double> z0_for_cutoff(const CalibrationAnchors& a, double c0, double d, double eps) {
    const double kd = two_pi * a.f_cutoff * std::sqrt(eps) / c_light * d;
    if (!(kd > 0.0 && kd < pi)) return std::nullopt;
    return (1.0 + std::cos(kd)) / (pi * a.f_cutoff * c0 * std::sin(kd));
}

std::array<double, 2> initial_guess(const CalibrationAnchors& a, double c0, double d) {
    // Scan eps_eff on a log grid with z0 eliminated through the cutoff anchor,
    // then bisect the phase residual on the first sign change.
    constexpr int kGrid = 400;
    const double eps_max = std::pow(c_light / (2.0 * a.f_cutoff * d), 2);
    auto phase_residual = [&](double eps) -> std::optional<double> {
        const auto z0 = z0_for_cutoff(a, c0, d, eps);
        if (!z0) return std::nullopt;
        return residuals(a, c0, d, *z0, eps).phase;
    };

    double prev_eps = 1.0;
    std::optional<double> prev = phase_residual(prev_eps);
    for (int i = 1; i <= kGrid; ++i) {
        const double eps = std::exp(std::log(eps_max) * i / kGrid) * (1.0 - 1e-9);
        const auto r = phase_residual(eps);
        if (prev && r && (*prev) * (*r) <= 0.0) {
            double lo = prev_eps, hi = eps;
            double r_lo = *prev;
            for (int k = 0; k < 80; ++k) {
                const double mid = std::sqrt(lo * hi);
                const double r_mid = *phase_residual(mid);
                if (r_lo * r_mid <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    r_lo = r_mid;
                }
            }
            const double eps0 = std::sqrt(lo * hi);
            return {*z0_for_cutoff(a, c0, d, eps0), eps0};
        }
        prev = r;
        prev_eps = eps;
    }
    throw DomainError("calibrate_line: no line with eps_eff >= 1 reaches both anchors");
}

}  // namespace

LineSpec calibrate_line(const CalibrationAnchors& anchors, double c0, double d) {
    if (!(d > 0.0)) throw DomainError("calibrate_line: cell length must be > 0");
    if (c0 == 0.0) {
        throw UnderdeterminedError(
            "calibrate_line: an unloaded cell fixes eps_eff only; z0 is not determined");
    }
    if (!(c0 > 0.0)) throw DomainError("calibrate_line: c0 must be > 0");
    if (!(anchors.beta_d > 0.0 && anchors.beta_d < pi)) {
        throw DomainError("calibrate_line: phase anchor must lie in (0, pi)");
    }
    if (!(anchors.f_beta > 0.0 && anchors.f_beta < anchors.f_cutoff)) {
        throw DomainError("calibrate_line: phase anchor frequency must lie below the cutoff anchor");
    }

    const auto start = initial_guess(anchors, c0, d);
    double x0 = std::log(start[0]);
    double x1 = std::log(start[1]);
    auto eval = [&](double lz, double le) {
        return residuals(anchors, c0, d, std::exp(lz), std::exp(le));
    };

    constexpr int kMaxIter = 100;
    constexpr double kTol = 1e-12;
    constexpr double h = 1e-7;
    Residuals r = eval(x0, x1);
    for (int iter = 0; iter < kMaxIter; ++iter) {
        if (std::max(std::abs(r.phase), std::abs(r.cutoff)) < kTol) {
            LineSpec line{std::exp(x0), std::exp(x1)};
            line.validate();
            return line;
        }
        const Residuals rz_p = eval(x0 + h, x1), rz_m = eval(x0 - h, x1);
        const Residuals re_p = eval(x0, x1 + h), re_m = eval(x0, x1 - h);
        const double j00 = (rz_p.phase - rz_m.phase) / (2 * h);
        const double j01 = (re_p.phase - re_m.phase) / (2 * h);
        const double j10 = (rz_p.cutoff - rz_m.cutoff) / (2 * h);
        const double j11 = (re_p.cutoff - re_m.cutoff) / (2 * h);
        const double det = j00 * j11 - j01 * j10;
        if (std::abs(det) < 1e-300) break;
        const double dx0 = -(j11 * r.phase - j01 * r.cutoff) / det;
        const double dx1 = -(-j10 * r.phase + j00 * r.cutoff) / det;

        double lambda = 1.0;
        Residuals trial = eval(x0 + dx0, x1 + dx1);
        for (int halving = 0; halving < 30 && !(trial.norm() < r.norm()); ++halving) {
            lambda *= 0.5;
            trial = eval(x0 + lambda * dx0, x1 + lambda * dx1);
        }
        x0 += lambda * dx0;
        x1 += lambda * dx1;
        r = trial;
    }
    throw NumericError("calibrate_line: damped Newton did not converge", {r.phase, r.cutoff});
}

}  // namespace ringwave
