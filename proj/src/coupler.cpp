#include "ringwave/coupler.hpp"
#include "ringwave/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ringwave {

using constants::pi;

void CoupledLineSpec::validate() const {
    if (!(z_odd > 0.0)) throw DomainError("coupler: z_odd must be > 0");
    if (!(z_even > z_odd)) throw DomainError("coupler: z_even must exceed z_odd");
    if (!(f_design > 0.0)) throw DomainError("coupler: f_design must be > 0");
}

ImageImpedances image_impedances(double theta, const CoupledLineSpec& spec) {
    spec.validate();
    if (!(theta > 0.0 && theta < pi)) throw DomainError("image_impedances: theta must lie in (0, pi)");
    const double s = std::sin(theta);
    if (s < 1e-12) throw DomainError("image_impedances: singular at theta = 0 or pi");
    const double ze = spec.z_even, zo = spec.z_odd;
    const double c = std::cos(theta);
    const double arg = (zo - ze) * (zo - ze) - (zo + ze) * (zo + ze) * c * c;
    // sqrt of a negative real gives +j|.|, so z_i turns purely imaginary outside.
    const cplx root = std::sqrt(cplx{arg, 0.0});
    const cplx z_i = std::sqrt(zo * ze) * root / ((zo + ze) * s);
    return {z_i, zo * ze / z_i};
}

PassbandEdges passband_edges(const CoupledLineSpec& spec) {
    spec.validate();
    const double k = (spec.z_even - spec.z_odd) / (spec.z_even + spec.z_odd);
    const double lo = std::acos(k);
    return {lo, pi - lo};
}

namespace {

// |S21| in dB of the open-ended coupled section (ports on opposite corners).
// Z11 = -j (Ze + Zo)/2 cot(theta), Z13 = -j (Ze - Zo)/2 csc(theta); its
// symmetric image impedance is z_i (Ze + Zo) / (2 sqrt(Ze Zo)).
double insertion_loss_db(double theta, const CoupledLineSpec& spec, double z_ref) {
    const double ze = spec.z_even, zo = spec.z_odd;
    const cplx z11{0.0, -0.5 * (ze + zo) / std::tan(theta)};
    const cplx z13{0.0, -0.5 * (ze - zo) / std::sin(theta)};
    const cplx a = z11 / z13;
    const cplx b = (z11 * z11 - z13 * z13) / z13;
    const cplx c = 1.0 / z13;
    const cplx s21 = 2.0 / (a + b / z_ref + c * z_ref + a);
    return -20.0 * std::log10(std::abs(s21));
}

}  // namespace

double rejection_estimate(double f, const CoupledLineSpec& spec, double z_ref, double stopband_db) {
    spec.validate();
    if (!(f > 0.0)) throw DomainError("rejection_estimate: f must be > 0");
    if (!(z_ref > 0.0)) throw DomainError("rejection_estimate: z_ref must be > 0");
    const double theta = spec.theta_at(f);
    const double s = std::abs(std::sin(theta));
    if (s < 1e-9) return stopband_db;
    const double rel = insertion_loss_db(theta, spec, z_ref) - insertion_loss_db(0.5 * pi, spec, z_ref);
    return std::clamp(rel, 0.0, stopband_db);
}

}  // namespace ringwave
