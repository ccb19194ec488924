#pragma once

// Shared domain types: the junction varactor, the varactor-loaded line cell,
// the closed ring built from N cells, and the two port matching networks.

#include <complex>
#include <numbers>

namespace ringwave {

using cplx = std::complex<double>;

namespace constants {
inline constexpr double c_light = 299'792'458.0;  // m/s
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace constants

/// Abrupt/graded junction varactor, C(v) = c0 (1 + (v_bias + v)/vj)^-m.
/// Positive v is reverse bias.
struct Varactor {
    double c0 = 2.67e-12;  // F at zero bias
    double vj = 0.7;       // V
    double m = 0.5;
    double v_bias = 0.0;   // V, reverse
    double r_s = 0.5;      // ohm

    /// Throws DomainError if any invariant is violated.
    void validate() const;
};

/// Second-order Taylor expansion of C(v) about v = 0.
struct TaylorCoeffs {
    double c0 = 0.0;  // F
    double c1 = 0.0;  // F/V
    double c2 = 0.0;  // F/V^2

    double evaluate(double v) const { return c0 + c1 * v + c2 * v * v; }
};

/// Unloaded transmission line. Attenuation scales as sqrt(f / alpha_ref_freq).
struct LineSpec {
    double z0 = 50.0;               // ohm
    double eps_eff = 1.0;
    double alpha = 0.0;             // Np/m at alpha_ref_freq
    double alpha_ref_freq = 2.4e9;  // Hz

    void validate() const;
    double alpha_at(double f) const;
    /// Series inductance per metre of the unloaded line.
    double inductance_per_m() const;
    /// Shunt capacitance per metre of the unloaded line.
    double capacitance_per_m() const;
};

/// One cell: half line, shunt varactor, half line. `d` is the full cell length.
struct UnitCell {
    double d = 4e-3;
    LineSpec line;
    Varactor varactor;

    void validate() const;
};

/// Closed ring of `n_cells` cells.
///
/// Positions on the ring are "stations" 0 .. 2N-1 spaced half a cell apart.
/// Even stations are cell boundaries, odd station 2n-1 holds varactor n
/// (n = 1..N). The ring closes on itself: station 2N is station 0.
struct RingSpec {
    int n_cells = 3;
    UnitCell cell;
    int node_m = 0;  // pump / doubler-output port station
    int node_d = 3;  // divider-output port station

    void validate() const;
    int station_count() const { return 2 * n_cells; }
    static bool is_varactor_station(int station) { return station % 2 == 1; }
    /// Station diametrically opposite station 0.
    static int opposite_station(int n_cells) { return n_cells; }
};

enum class PortKind {
    doubler_lc,   // node M: series L1, series C1 into the port
    divider_ll,   // node D: series L2 from the ring, L3 shunt at the port
};

/// Matching network between a ring node and a z_ref port.
struct PortNetwork {
    PortKind kind = PortKind::doubler_lc;
    double l1 = 2e-9;
    double c1 = 0.7e-12;
    double l2 = 0.5e-9;
    double l3 = 1e-9;
    /// Shunt branch at node M that shorts it at return_f and is open at
    /// 2 return_f: series capacitor into a parallel tank. return_l is the tank
    /// inductance; 0 leaves the branch out. Only used by doubler_lc ports.
    double return_l = 0.5e-9;
    double return_f = 2.2e9;
    double z_ref = 50.0;
    /// Inductor quality factor at q_ref_freq; <= 0 means lossless.
    double inductor_q = 40.0;
    double q_ref_freq = 2.4e9;

    void validate() const;
    /// Series loss resistance of an inductor of value `l` under the Q model.
    double inductor_resistance(double l) const;
    bool has_return_branch() const { return kind == PortKind::doubler_lc && return_l > 0.0; }
    /// Tank capacitor of the return branch (resonant with return_l at 2 return_f).
    double return_tank_c() const;
    /// Series capacitor of the return branch (series resonance at return_f).
    double return_series_c() const;
};

/// The two ports of the ring: `doubler` sits at node M, `divider` at node D.
struct PortPair {
    PortNetwork doubler{PortKind::doubler_lc};
    PortNetwork divider{PortKind::divider_ll};
};

/// Junction capacitance at incremental voltage v. DomainError for v_bias + v <= -vj.
double capacitance(double v, const Varactor& var);

/// Junction charge with Q(0) = 0 and dQ/dv = capacitance(v).
double varactor_charge(double v, const Varactor& var);

/// Taylor coefficients of capacitance(v) about v = 0, truncated at second order.
TaylorCoeffs taylor_coefficients(const Varactor& var);

/// Charge model that stays finite under forward drive: for v below
/// -fc * (vj + v_bias) the capacitance continues linearly (SPICE FC rule).
/// Identical to varactor_charge inside the reverse region.
double extended_charge(double v, const Varactor& var, double fc = 0.5);

/// d/dv of extended_charge.
double extended_capacitance(double v, const Varactor& var, double fc = 0.5);

}  // namespace ringwave
