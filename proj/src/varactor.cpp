#include "ringwave/core.hpp"
#include "ringwave/errors.hpp"

#include <cmath>
#include <string>

namespace ringwave {

namespace {

// Antiderivative of the capacitance law in the total junction voltage u.
double charge_primitive(double u, const Varactor& var) {
    const double x = 1.0 + u / var.vj;
    if (std::abs(1.0 - var.m) < 1e-12) {
        return var.c0 * var.vj * std::log(x);
    }
    return var.c0 * var.vj / (1.0 - var.m) * std::pow(x, 1.0 - var.m);
}

double capacitance_total(double u, const Varactor& var) {
    return var.c0 * std::pow(1.0 + u / var.vj, -var.m);
}

}  // namespace

void Varactor::validate() const {
    // c0 = 0 stands for an unloaded line cell.
    if (!(c0 >= 0.0)) throw DomainError("varactor c0 must be >= 0");
    if (!(vj > 0.0)) throw DomainError("varactor vj must be > 0");
    // m = 0 is admitted: it is the linear-capacitor limit used by the linear test benches.
    if (!(m >= 0.0 && m < 1.5)) throw DomainError("varactor grading factor must lie in [0, 1.5)");
    if (!(v_bias >= 0.0)) throw DomainError("varactor reverse bias must be >= 0");
    if (!(r_s >= 0.0)) throw DomainError("varactor series resistance must be >= 0");
}

void LineSpec::validate() const {
    if (!(z0 > 0.0)) throw DomainError("line z0 must be > 0");
    if (!(eps_eff >= 1.0)) throw DomainError("line eps_eff must be >= 1");
    if (!(alpha >= 0.0)) throw DomainError("line alpha must be >= 0");
    if (!(alpha_ref_freq > 0.0)) throw DomainError("line alpha reference frequency must be > 0");
}

double LineSpec::alpha_at(double f) const {
    if (alpha == 0.0 || f <= 0.0) return 0.0;
    return alpha * std::sqrt(f / alpha_ref_freq);
}

double LineSpec::inductance_per_m() const {
    return z0 * std::sqrt(eps_eff) / constants::c_light;
}

double LineSpec::capacitance_per_m() const {
    return std::sqrt(eps_eff) / (z0 * constants::c_light);
}

void UnitCell::validate() const {
    if (!(d > 0.0)) throw DomainError("cell length d must be > 0");
    line.validate();
    varactor.validate();
}

void RingSpec::validate() const {
    if (n_cells < 1) throw DomainError("ring needs at least one cell");
    cell.validate();
    const int stations = station_count();
    if (node_m < 0 || node_m >= stations || node_d < 0 || node_d >= stations) {
        throw DomainError("ring port station out of range [0, " + std::to_string(stations) + ")");
    }
    if (node_m == node_d) throw DomainError("ring ports M and D must be distinct stations");
}

void PortNetwork::validate() const {
    if (!(z_ref > 0.0)) throw DomainError("port reference impedance must be > 0");
    switch (kind) {
    case PortKind::doubler_lc:
        if (!(l1 > 0.0 && c1 > 0.0)) throw DomainError("doubler port needs l1 > 0 and c1 > 0");
        if (!(return_l >= 0.0)) throw DomainError("return_l must be >= 0");
        if (return_l > 0.0 && !(return_f > 0.0)) throw DomainError("return_f must be > 0");
        break;
    case PortKind::divider_ll:
        if (!(l2 > 0.0 && l3 > 0.0)) throw DomainError("divider port needs l2 > 0 and l3 > 0");
        break;
    }
}

double PortNetwork::inductor_resistance(double l) const {
    if (inductor_q <= 0.0) return 0.0;
    return constants::two_pi * q_ref_freq * l / inductor_q;
}

double PortNetwork::return_tank_c() const {
    const double w2 = 2.0 * constants::two_pi * return_f;
    return 1.0 / (w2 * w2 * return_l);
}

double PortNetwork::return_series_c() const {
    // At return_f the tank is inductive with reactance (4/3) w L.
    const double w1 = constants::two_pi * return_f;
    return 1.0 / (w1 * (4.0 / 3.0) * w1 * return_l);
}

double capacitance(double v, const Varactor& var) {
    const double u = var.v_bias + v;
    if (!(u > -var.vj)) {
        throw DomainError("capacitance: junction voltage " + std::to_string(u) +
                          " V is at or beyond the forward limit -vj");
    }
    return capacitance_total(u, var);
}

double varactor_charge(double v, const Varactor& var) {
    const double u = var.v_bias + v;
    if (!(u > -var.vj)) {
        throw DomainError("varactor_charge: junction voltage beyond the forward limit -vj");
    }
    return charge_primitive(u, var) - charge_primitive(var.v_bias, var);
}

TaylorCoeffs taylor_coefficients(const Varactor& var) {
    const double c_at_bias = capacitance_total(var.v_bias, var);
    const double v_eff = var.vj + var.v_bias;
    return {c_at_bias,
            -var.m * c_at_bias / v_eff,
            var.m * (var.m + 1.0) * c_at_bias / (2.0 * v_eff * v_eff)};
}

double extended_charge(double v, const Varactor& var, double fc) {
    const double u = var.v_bias + v;
    const double u_f = -fc * var.vj;
    const double q_bias = charge_primitive(var.v_bias, var);
    if (u > u_f) return charge_primitive(u, var) - q_bias;
    const double c_f = capacitance_total(u_f, var);
    const double dc_f = -var.m * c_f / (var.vj + u_f);
    const double du = u - u_f;
    return charge_primitive(u_f, var) - q_bias + c_f * du + 0.5 * dc_f * du * du;
}

double extended_capacitance(double v, const Varactor& var, double fc) {
    const double u = var.v_bias + v;
    const double u_f = -fc * var.vj;
    if (u > u_f) return capacitance_total(u, var);
    const double c_f = capacitance_total(u_f, var);
    const double dc_f = -var.m * c_f / (var.vj + u_f);
    return c_f + dc_f * (u - u_f);
}

}  // namespace ringwave
