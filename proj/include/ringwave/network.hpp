#pragma once

// Lumped circuit netlist shared by the AC and transient solvers, and the
// builder that turns a ring plus its two port networks into such a netlist.

#include "ringwave/core.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ringwave {

inline constexpr int kGround = -1;

enum class ElementKind { resistor, capacitor, inductor, varactor, source };

/// Two-terminal element between nodes a and b (kGround for ground).
/// Current is counted from a to b through the element.
struct Element {
    ElementKind kind = ElementKind::resistor;
    int a = kGround;
    int b = kGround;
    double value = 0.0;     // ohm, F or H
    double r_series = 0.0;  // inductor loss or source resistance (ohm)
    double amplitude = 0.0; // source EMF amplitude (V), v(t) = A sin(2 pi f t + phase)
    double freq = 0.0;      // Hz
    double phase = 0.0;     // rad
    Varactor varactor;      // ElementKind::varactor only
    std::string name;
};

struct NetworkPort {
    std::string name;
    int node = kGround;
    double z_ref = 50.0;
};

struct CircuitNetwork {
    std::vector<std::string> node_names;
    std::vector<Element> elements;
    std::vector<NetworkPort> ports;

    int add_node(std::string name);
    int node(std::string_view name) const;  // TopologyError if absent
    int node_count() const { return static_cast<int>(node_names.size()); }
    const NetworkPort& port(std::string_view name) const;

    void add_resistor(int a, int b, double r, std::string name = {});
    void add_capacitor(int a, int b, double c, std::string name = {});
    void add_inductor(int a, int b, double l, double r_series = 0.0, std::string name = {});
    void add_varactor(int a, int b, const Varactor& var, std::string name = {});
    void add_source(int a, int b, double amplitude, double freq, double r_series,
                    double phase = 0.0, std::string name = {});

    int inductor_count() const;
    bool has_nonlinear() const;

    /// Checks element values and node indices. With require_dc_path, every node
    /// must reach ground through inductors, resistors or source resistances.
    void validate(bool require_dc_path = true) const;
};

enum class DriveMode {
    divider,  // drive port M (L1/C1), read port D (L2/L3)
    doubler,  // drive port D, read port M
};

struct NetworkOptions {
    /// Line sections per half cell, each a pi-network of L and C.
    int segments_per_half_cell = 2;
    /// Replace each varactor by a linear capacitor at its bias capacitance.
    bool linear_varactors = false;
    /// Drop inductor Q loss, varactor r_s and line attenuation.
    bool lossless = false;
    /// Attach the port networks and their z_ref terminations.
    bool include_ports = true;
    double source_amplitude = 0.0;  // V EMF
    double source_freq = 0.0;       // Hz
    /// Source resistance at the driven port; 0 uses that port's z_ref.
    double source_resistance = 0.0;
};

/// Lumped equivalent of the ring: each half cell becomes `segments` series
/// inductors with the line capacitance split onto their end nodes; varactors
/// (with r_s) hang from the odd stations. Nodes are named "st<k>" for
/// stations, "st<k>.<j>" inside a half cell, "j<n>" for junctions, and the
/// port nodes "port_M" / "port_D". Ports "in" and "out" follow `mode`.
CircuitNetwork build_nrr_network(const RingSpec& ring, const PortPair& ports, DriveMode mode,
                                 const NetworkOptions& options = {});

/// Phasor node voltages at frequency f. Sources whose frequency equals f
/// contribute their EMF; a unit current is injected at `inject_node` when it
/// is not kGround. Varactors are linearised at bias.
std::vector<cplx> ac_solve(const CircuitNetwork& net, double f, int inject_node = kGround);

/// Driving-point impedance between `node` and ground (sources shorted).
cplx ac_impedance(const CircuitNetwork& net, double f, int node);

/// Total energy in capacitors, varactors and inductors for the given state.
double stored_energy(const CircuitNetwork& net, const std::vector<double>& node_v,
                     const std::vector<double>& inductor_i);

}  // namespace ringwave
