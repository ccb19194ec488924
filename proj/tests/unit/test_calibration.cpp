#include "fixtures.hpp"
#include "ringwave/dispersion.hpp"
#include "ringwave/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ringwave;

TEST(Calibration, HitsBothAnchors) {
    const CalibrationAnchors a;
    const LineSpec line = calibrate_line(a, 2.67e-12, 4e-3);
    const double beta_d = std::acos(dispersion_rhs(a.f_beta, line, 4e-3, 2.67e-12));
    EXPECT_NEAR(beta_d / a.beta_d, 1.0, 1e-9);
    EXPECT_NEAR(dispersion_rhs(a.f_cutoff, line, 4e-3, 2.67e-12), -1.0, 1e-9);
    EXPECT_GT(line.z0, 0.0);
    EXPECT_GE(line.eps_eff, 1.0);
}

TEST(Calibration, CutoffFrequencyAgrees) {
    UnitCell cell;
    cell.line = calibrate_line(CalibrationAnchors{}, cell.varactor.c0, cell.d);
    EXPECT_NEAR(cutoff_frequency(cell) / 5.4e9, 1.0, 1e-5);
}

TEST(Calibration, OtherAnchorsAreReproduced) {
    CalibrationAnchors a;
    a.beta_d = 0.8;
    a.f_beta = 1.9e9;
    a.f_cutoff = 6.1e9;
    const LineSpec line = calibrate_line(a, 1.5e-12, 5e-3);
    EXPECT_NEAR(std::acos(dispersion_rhs(a.f_beta, line, 5e-3, 1.5e-12)), 0.8, 1e-8);
    EXPECT_NEAR(dispersion_rhs(a.f_cutoff, line, 5e-3, 1.5e-12), -1.0, 1e-8);
}

TEST(Calibration, ZeroLoadIsUnderdetermined) {
    EXPECT_THROW(calibrate_line(CalibrationAnchors{}, 0.0, 4e-3), UnderdeterminedError);
}

TEST(Calibration, CutoffBelowAnchorIsDomainError) {
    CalibrationAnchors a;
    a.f_cutoff = 2.0e9;
    EXPECT_THROW(calibrate_line(a, 2.67e-12, 4e-3), DomainError);
}
