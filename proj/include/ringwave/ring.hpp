#pragma once

// Linear analysis of the closed ring: driving-point impedance, resonance
// search and the reflection seen at the two matched ports.

#include "ringwave/core.hpp"
#include "ringwave/two_port.hpp"

#include <array>
#include <vector>

namespace ringwave {

/// Matrix of the whole ring read from `station` around back to `station`.
/// The shunt varactor at `station` (if any) sits at the start of the chain.
TwoPortMatrix ring_loop_abcd(double f, const RingSpec& ring, int station);

/// Driving-point impedance at an arbitrary ring station.
cplx ring_impedance_at(double f, const RingSpec& ring, int station);

/// Driving-point impedance at node M: both arcs from M back to M in parallel.
/// An exact pole returns +-j infinity.
cplx ring_input_impedance(double f, const RingSpec& ring);

/// 2x2 nodal admittance matrix of the ring between stations M (index 0)
/// and D (index 1): the two arcs in parallel plus any shunt varactors at M, D.
std::array<std::array<cplx, 2>, 2> ring_port_admittance(double f, const RingSpec& ring);

enum class ResonanceKind { zero, pole };

struct Resonance {
    double freq = 0.0;
    ResonanceKind kind = ResonanceKind::zero;
    double q_estimate = 0.0;  // infinity for a lossless ring
};

/// Zeros and poles of ring_input_impedance in (f_lo, min(f_hi, fc)).
/// 2000-point scan of Im Z; a rising crossing is a zero, a falling one a pole
/// (Foster). Each is refined by bisection to 100 kHz. Sorted ascending.
std::vector<Resonance> find_resonances(const RingSpec& ring, double f_lo, double f_hi);

/// Impedance of a port network looking from its ring node toward the port,
/// with the port terminated in z_ref.
cplx port_load_impedance(double f, const PortNetwork& port);

struct PortReflection {
    cplx s11;  // divider port (node D, L2/L3)
    cplx s22;  // doubler port (node M, L1/C1)
};

/// Reflection at each z_ref port looking through its matching network into
/// the ring, with the opposite port terminated. Varactors are linearised at bias.
PortReflection port_reflection(double f, const RingSpec& ring, const PortPair& ports);

}  // namespace ringwave
