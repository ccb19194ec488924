#include "fixtures.hpp"
#include "ringwave/dispersion.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ringwave;
using ringwave::test::calibrated_ring;

TEST(Dispersion, CellMatrixIsReciprocalAndSymmetric) {
    const RingSpec ring = calibrated_ring();
    for (double f : {0.3e9, 2.4e9, 4.8e9, 7e9}) {
        const TwoPortMatrix t = unit_cell_abcd(f, ring.cell);
        EXPECT_NEAR(std::abs(t.det() - 1.0), 0.0, 1e-12) << f;
        EXPECT_NEAR(std::abs(t.a - t.d), 0.0, 1e-12) << f;
    }
}

TEST(Dispersion, LosslessPhaseMatchesRelation) {
    RingSpec ring = calibrated_ring();
    ring.cell.varactor.r_s = 0.0;
    for (double f : {0.5e9, 1.5e9, 2.4e9, 4.0e9, 5.2e9}) {
        const double rhs = dispersion_rhs(f, ring.cell.line, ring.cell.d, ring.cell.varactor.c0);
        const LoadedPhase ph = loaded_phase(f, ring.cell);
        EXPECT_NEAR(ph.beta_d, std::acos(rhs), 1e-9) << f;
        EXPECT_NEAR(ph.alpha_d, 0.0, 1e-7) << f;
        EXPECT_FALSE(ph.evanescent);
    }
}

TEST(Dispersion, StopBandAboveCutoff) {
    RingSpec ring = calibrated_ring();
    ring.cell.varactor.r_s = 0.0;
    const LoadedPhase ph = loaded_phase(6.0e9, ring.cell);
    EXPECT_TRUE(ph.evanescent);
    EXPECT_GT(ph.alpha_d, 0.1);
    EXPECT_NEAR(ph.beta_d, constants::pi, 1e-9);
}

TEST(Dispersion, PhaseIncreasesWithFrequencyInPassBand) {
    const RingSpec ring = calibrated_ring();
    double prev = 0.0;
    for (double f = 0.1e9; f < 5.3e9; f += 0.1e9) {
        const double b = loaded_phase(f, ring.cell).beta_d;
        EXPECT_GT(b, prev) << f;
        prev = b;
    }
}

TEST(Dispersion, LoadingSlowsTheWave) {
    const RingSpec ring = calibrated_ring();
    const double kd = unloaded_phase(2.4e9, ring.cell.line, ring.cell.d);
    EXPECT_GT(loaded_phase(2.4e9, ring.cell).beta_d, kd);
}

TEST(Dispersion, UnloadedCellHasNoCutoff) {
    UnitCell cell;
    cell.varactor.c0 = 0.0;
    EXPECT_TRUE(std::isinf(cutoff_frequency(cell)));
}

TEST(Dispersion, LineSectionMatchesTwoPortLine) {
    LineSpec line{30.0, 4.0};
    const double f = 3e9, l = 7e-3;
    const TwoPortMatrix t = line_section_abcd(f, line, l);
    const double bl = 2 * constants::pi * f * 2.0 / constants::c_light * l;
    EXPECT_NEAR(t.a.real(), std::cos(bl), 1e-12);
    EXPECT_NEAR(t.b.imag(), 30.0 * std::sin(bl), 1e-9);
    EXPECT_NEAR(t.c.imag(), std::sin(bl) / 30.0, 1e-12);
}
