#pragma once

// Small-signal behaviour of one varactor-loaded cell: Bloch phase, cutoff and
// the cell transmission matrix. Varactors are linearised at their bias point.

#include "ringwave/core.hpp"
#include "ringwave/two_port.hpp"

namespace ringwave {

/// Phase kd of the unloaded line over `d` at frequency f.
double unloaded_phase(double f, const LineSpec& line, double d);

/// Right-hand side of the lossless dispersion relation
/// cos(beta d) = cos(kd) - (pi f c_shunt z0) sin(kd).
double dispersion_rhs(double f, const LineSpec& line, double d, double c_shunt);

struct LoadedPhase {
    double beta_d = 0.0;   // rad, in [0, pi]
    double alpha_d = 0.0;  // Np per cell, >= 0
    bool evanescent = false;

    cplx value() const { return {beta_d, alpha_d}; }
};

/// Bloch phase of the cell at f > 0 from the half-line / shunt / half-line
/// cascade. Includes line attenuation and varactor series resistance when
/// present; `evanescent` is set when f lies in the stop band.
LoadedPhase loaded_phase(double f, const UnitCell& cell);

/// Smallest frequency where the lossless dispersion right-hand side reaches -1,
/// resolved to 1 kHz. +infinity when the cell carries no capacitance.
double cutoff_frequency(const UnitCell& cell);

/// Small-signal admittance of the varactor (junction at bias in series with r_s).
cplx varactor_admittance(double f, const Varactor& var);

/// Transmission matrix of one cell: half line, shunt varactor, half line.
TwoPortMatrix unit_cell_abcd(double f, const UnitCell& cell);

/// Matrix of a uniform line section of the given length.
TwoPortMatrix line_section_abcd(double f, const LineSpec& line, double length);

}  // namespace ringwave
