#include "fixtures.hpp"
#include "oracles.hpp"
#include "ringwave/ring.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ringwave;
using ringwave::test::calibrated_ring;

TEST(Ring, InputImpedanceMatchesNodalSolve) {
    const RingSpec ring = calibrated_ring();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> freq(0.2e9, 5.3e9);
    for (int i = 0; i < 50; ++i) {
        const double f = freq(rng);
        const cplx a = ring_input_impedance(f, ring);
        const cplx b = test::nodal_ring_impedance(f, ring);
        EXPECT_LT(std::abs(a - b) / std::abs(b), 1e-9) << f;
    }
}

TEST(Ring, NodalAgreementWithLineLoss) {
    RingSpec ring = calibrated_ring(4);
    ring.cell.line.alpha = 0.8;
    for (double f : {0.7e9, 1.9e9, 3.3e9}) {
        const cplx a = ring_input_impedance(f, ring);
        const cplx b = test::nodal_ring_impedance(f, ring);
        EXPECT_LT(std::abs(a - b) / std::abs(b), 1e-9) << f;
    }
}

TEST(Ring, ImpedanceIsTheSameFromEveryBoundaryStation) {
    const RingSpec ring = calibrated_ring();
    const cplx z0 = ring_impedance_at(1.7e9, ring, 0);
    for (int s : {2, 4}) EXPECT_LT(std::abs(ring_impedance_at(1.7e9, ring, s) - z0) / std::abs(z0), 1e-9);
}

TEST(Ring, ThreeCellResonances) {
    const auto res = find_resonances(calibrated_ring(3), 0.5e9, 6e9);
    ASSERT_EQ(res.size(), 2u);
    EXPECT_EQ(res[0].kind, ResonanceKind::zero);
    EXPECT_EQ(res[1].kind, ResonanceKind::pole);
    EXPECT_NEAR(res[0].freq / 2.4e9, 1.0, 0.01);
    EXPECT_NEAR(res[1].freq / (2.0 * res[0].freq), 1.0, 0.1);
    EXPECT_GT(res[0].q_estimate, 1.0);
}

TEST(Ring, TwoCellsHaveNoPair) {
    const auto res = find_resonances(calibrated_ring(2), 0.5e9, 6e9);
    int zeros = 0, poles = 0;
    for (const auto& r : res) (r.kind == ResonanceKind::zero ? zeros : poles)++;
    EXPECT_FALSE(zeros >= 1 && poles >= 1);
}

TEST(Ring, FiveCellsHaveMoreResonances) {
    EXPECT_GT(find_resonances(calibrated_ring(5), 0.5e9, 6e9).size(),
              find_resonances(calibrated_ring(3), 0.5e9, 6e9).size());
}

TEST(Ring, LosslessZeroIsAShort) {
    RingSpec ring = calibrated_ring();
    ring.cell.varactor.r_s = 0.0;
    const auto res = find_resonances(ring, 0.5e9, 6e9);
    ASSERT_FALSE(res.empty());
    EXPECT_LT(std::abs(ring_input_impedance(res[0].freq, ring)), 0.05);
}

TEST(Ring, PortReflectionIsPassive) {
    const RingSpec ring = calibrated_ring();
    const PortPair ports;
    for (double f = 0.5e9; f < 5.3e9; f += 0.25e9) {
        const PortReflection r = port_reflection(f, ring, ports);
        EXPECT_LE(std::abs(r.s11), 1.0 + 1e-12) << f;
        EXPECT_LE(std::abs(r.s22), 1.0 + 1e-12) << f;
    }
}

TEST(Ring, PortAdmittanceIsSymmetric) {
    const auto y = ring_port_admittance(2.0e9, calibrated_ring());
    EXPECT_LT(std::abs(y[0][1] - y[1][0]), 1e-12 * std::abs(y[0][0]));
}

TEST(Ring, ReturnBranchShortsNodeM) {
    PortNetwork p{PortKind::doubler_lc};
    p.inductor_q = 0.0;
    PortNetwork bare = p;
    bare.return_l = 0.0;
    // At return_f the branch is a short, so the load seen from the ring is ~0.
    EXPECT_LT(std::abs(port_load_impedance(p.return_f, p)), 1e-6);
    // Near 2 return_f the tank opens and the branch disappears.
    const double f2 = 2.0 * p.return_f * (1.0 + 1e-7);
    const cplx with = port_load_impedance(f2, p);
    const cplx without = port_load_impedance(f2, bare);
    EXPECT_LT(std::abs(with - without) / std::abs(without), 1e-4);
}
