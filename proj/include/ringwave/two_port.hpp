#pragma once

#include "ringwave/core.hpp"

namespace ringwave {

/// 2x2 transmission (ABCD) matrix: [V1; I1] = T [V2; I2], with I2 leaving port 2.
struct TwoPortMatrix {
    cplx a{1.0};
    cplx b{0.0};  // ohm
    cplx c{0.0};  // S
    cplx d{1.0};

    static TwoPortMatrix identity() { return {}; }
    static TwoPortMatrix series_impedance(cplx z) { return {1.0, z, 0.0, 1.0}; }
    static TwoPortMatrix shunt_admittance(cplx y) { return {1.0, 0.0, y, 1.0}; }
    /// Uniform line of characteristic impedance z0 and complex electrical
    /// length gamma_l = (alpha + j beta) * length.
    static TwoPortMatrix line(cplx z0, cplx gamma_l);

    cplx det() const { return a * d - b * c; }

    /// Impedance looking into port 1 with port 2 terminated in z_load.
    cplx input_impedance(cplx z_load) const { return (a * z_load + b) / (c * z_load + d); }

    /// Repeated cascade T^n, n >= 0.
    TwoPortMatrix pow(int n) const;

    friend TwoPortMatrix operator*(const TwoPortMatrix& x, const TwoPortMatrix& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
};

/// Driving-point impedance of a two-port whose two ends are joined into one
/// node and fed there: Z = B / (A + D - 2) for a reciprocal chain.
/// Returns +-j infinity when the denominator vanishes.
cplx closed_loop_impedance(const TwoPortMatrix& loop);

}  // namespace ringwave
