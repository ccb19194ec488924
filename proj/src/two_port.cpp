#include "ringwave/two_port.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ringwave {

TwoPortMatrix TwoPortMatrix::line(cplx z0, cplx gamma_l) {
    const cplx ch = std::cosh(gamma_l);
    const cplx sh = std::sinh(gamma_l);
    return {ch, z0 * sh, sh / z0, ch};
}

TwoPortMatrix TwoPortMatrix::pow(int n) const {
    if (n < 0) throw std::invalid_argument("TwoPortMatrix::pow: negative exponent");
    TwoPortMatrix result = identity();
    TwoPortMatrix base = *this;
    while (n > 0) {
        if (n & 1) result = result * base;
        base = base * base;
        n >>= 1;
    }
    return result;
}

cplx closed_loop_impedance(const TwoPortMatrix& loop) {
    const cplx den = loop.a + loop.d - 2.0;
    const double scale = std::abs(loop.a) + std::abs(loop.d) + 2.0;
    if (std::abs(den) <= 1e-15 * scale) {
        const double inf = std::numeric_limits<double>::infinity();
        // Sign of the reactance on the approach side follows Im(B) / Re(den).
        const double sign = (loop.b.imag() >= 0.0) == (den.real() >= 0.0) ? 1.0 : -1.0;
        return {0.0, sign * inf};
    }
    return loop.b / den;
}

}  // namespace ringwave
