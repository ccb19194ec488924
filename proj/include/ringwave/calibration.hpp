#pragma once

#include "ringwave/core.hpp"

namespace ringwave {

/// Targets pinning the unloaded line: a Bloch phase at one frequency and the
/// cutoff of the loaded line.
struct CalibrationAnchors {
    double beta_d = constants::pi / 3.0;  // rad per cell
    double f_beta = 2.4e9;                // Hz
    double f_cutoff = 5.4e9;              // Hz
};

/// Fits (z0, eps_eff) so that the lossless dispersion relation of a cell of
/// length `d` loaded by `c0` hits both anchors. Damped Newton in
/// (ln z0, ln eps_eff) from a one-dimensional elimination start.
///
/// Throws UnderdeterminedError for c0 == 0, DomainError for inconsistent
/// anchors and NumericError (with the last residuals) if 100 iterations do
/// not converge.
LineSpec calibrate_line(const CalibrationAnchors& anchors, double c0, double d);

}  // namespace ringwave
