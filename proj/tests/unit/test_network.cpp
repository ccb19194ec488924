#include "fixtures.hpp"
#include "ringwave/errors.hpp"
#include "ringwave/network.hpp"
#include "ringwave/ring.hpp"

#include <gtest/gtest.h>

using namespace ringwave;
using ringwave::test::calibrated_ring;

TEST(Network, LumpedRingConvergesToDistributed) {
    const RingSpec ring = calibrated_ring();
    NetworkOptions opt;
    opt.include_ports = false;
    opt.linear_varactors = true;
    opt.segments_per_half_cell = 16;
    const CircuitNetwork net = build_nrr_network(ring, PortPair{}, DriveMode::divider, opt);
    for (double f : {0.8e9, 1.6e9, 3.0e9}) {
        const cplx a = ac_impedance(net, f, net.node("st0"));
        const cplx b = ring_input_impedance(f, ring);
        EXPECT_LT(std::abs(a - b) / std::abs(b), 5e-3) << f;
    }
}

TEST(Network, RefinementReducesLumpingError) {
    const RingSpec ring = calibrated_ring();
    const double f = 3.0e9;
    const cplx ref = ring_input_impedance(f, ring);
    double prev = 1e9;
    for (int k : {1, 2, 4, 8}) {
        NetworkOptions opt;
        opt.include_ports = false;
        opt.linear_varactors = true;
        opt.segments_per_half_cell = k;
        const CircuitNetwork net = build_nrr_network(ring, PortPair{}, DriveMode::divider, opt);
        const double err = std::abs(ac_impedance(net, f, net.node("st0")) - ref);
        EXPECT_LT(err, prev) << k;
        prev = err;
    }
}

TEST(Network, StructureCounts) {
    const RingSpec ring = calibrated_ring();
    NetworkOptions opt;
    opt.include_ports = false;
    opt.segments_per_half_cell = 1;
    const CircuitNetwork net = build_nrr_network(ring, PortPair{}, DriveMode::divider, opt);
    EXPECT_EQ(net.inductor_count(), 6);
    EXPECT_TRUE(net.has_nonlinear());
    EXPECT_EQ(net.node_count(), 6 + 3);  // stations plus varactor junctions
}

TEST(Network, PortsFollowDriveMode) {
    const RingSpec ring = calibrated_ring();
    const CircuitNetwork div = build_nrr_network(ring, PortPair{}, DriveMode::divider);
    EXPECT_EQ(div.port("in").node, div.node("port_M"));
    EXPECT_EQ(div.port("out").node, div.node("port_D"));
    const CircuitNetwork dbl = build_nrr_network(ring, PortPair{}, DriveMode::doubler);
    EXPECT_EQ(dbl.port("in").node, dbl.node("port_D"));
    EXPECT_EQ(dbl.port("out").node, dbl.node("port_M"));
}

TEST(Network, ReturnBranchElements) {
    const RingSpec ring = calibrated_ring();
    PortPair ports;
    const CircuitNetwork with = build_nrr_network(ring, ports, DriveMode::divider);
    EXPECT_NO_THROW(with.node("return_M"));
    ports.doubler.return_l = 0.0;
    const CircuitNetwork without = build_nrr_network(ring, ports, DriveMode::divider);
    EXPECT_THROW(without.node("return_M"), TopologyError);
    EXPECT_EQ(with.inductor_count(), without.inductor_count() + 1);
}

TEST(Network, PortImpedanceMatchesClosedForm) {
    // With ports attached and no source, the impedance at port_M equals the
    // analytic port network looking into the ring with port D terminated.
    const RingSpec ring = calibrated_ring();
    const PortPair ports;
    NetworkOptions opt;
    opt.linear_varactors = true;
    opt.segments_per_half_cell = 16;
    const CircuitNetwork net = build_nrr_network(ring, ports, DriveMode::doubler, opt);
    const double f = 2.0e9;
    // Driving point at port_M includes its own 50 ohm termination in parallel.
    const cplx z_net = ac_impedance(net, f, net.node("port_M"));
    const cplx s22 = port_reflection(f, ring, ports).s22;
    const cplx z_in = 50.0 * (1.0 + s22) / (1.0 - s22);
    const cplx z_expect = 1.0 / (1.0 / z_in + 1.0 / 50.0);
    EXPECT_LT(std::abs(z_net - z_expect) / std::abs(z_expect), 1e-2);
}

TEST(Network, ValidateCatchesFloatingNode) {
    CircuitNetwork net;
    const int a = net.add_node("a");
    net.add_capacitor(a, kGround, 1e-12);
    EXPECT_THROW(net.validate(), TopologyError);
    EXPECT_NO_THROW(net.validate(false));
    net.add_resistor(a, kGround, 100.0);
    EXPECT_NO_THROW(net.validate());
}

TEST(Network, RejectsBadElementValues) {
    CircuitNetwork net;
    const int a = net.add_node("a");
    net.add_resistor(a, kGround, -5.0);
    EXPECT_THROW(net.validate(), TopologyError);
}
