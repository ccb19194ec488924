#pragma once

// Quarter-wave coupled-line section standing in for the center-fed arc
// coupler: image impedances, passband edges and a rejection estimate.

#include "ringwave/core.hpp"

namespace ringwave {

struct CoupledLineSpec {
    double z_even = 70.0;    // ohm
    double z_odd = 40.0;     // ohm
    double f_design = 2.4e9; // Hz, where theta = pi / 2

    void validate() const;
    /// Electrical length at f, linear in f (TEM).
    double theta_at(double f) const { return 0.5 * constants::pi * f / f_design; }
};

struct ImageImpedances {
    cplx z_i;
    cplx z_d;
};

/// Image impedances of the coupled section at electrical length theta in (0, pi).
/// z_i is real inside the passband and purely imaginary outside.
ImageImpedances image_impedances(double theta, const CoupledLineSpec& spec);

struct PassbandEdges {
    double theta_lo = 0.0;
    double theta_hi = 0.0;
};

/// Edges where cos(theta) = +-(z_even - z_odd) / (z_even + z_odd).
PassbandEdges passband_edges(const CoupledLineSpec& spec);

/// Insertion loss of the open-ended coupled section between z_ref ports,
/// relative to its loss at f_design, in dB. Values are capped at
/// `stopband_db`, which is also what a transmission zero (theta = k pi) reports.
double rejection_estimate(double f, const CoupledLineSpec& spec, double z_ref,
                          double stopband_db = 40.0);

}  // namespace ringwave
