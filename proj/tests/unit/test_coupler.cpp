#include "ringwave/coupler.hpp"
#include "ringwave/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ringwave;

TEST(Coupler, ImageImpedanceProduct) {
    const CoupledLineSpec s;
    const PassbandEdges e = passband_edges(s);
    for (double th = e.theta_lo + 0.01; th < e.theta_hi; th += 0.05) {
        const ImageImpedances z = image_impedances(th, s);
        EXPECT_NEAR(std::abs(z.z_i * z.z_d - s.z_even * s.z_odd) / (s.z_even * s.z_odd), 0.0, 1e-9) << th;
        EXPECT_NEAR(z.z_i.imag(), 0.0, 1e-9);
    }
}

TEST(Coupler, PassbandSymmetricAboutQuarterWave) {
    const CoupledLineSpec s;
    const PassbandEdges e = passband_edges(s);
    EXPECT_NEAR(e.theta_lo + e.theta_hi, constants::pi, 1e-12);
    const double k = (s.z_even - s.z_odd) / (s.z_even + s.z_odd);
    EXPECT_NEAR(std::cos(e.theta_lo), k, 1e-12);
}

TEST(Coupler, ImageImpedanceImaginaryOutsidePassband) {
    const CoupledLineSpec s;
    const PassbandEdges e = passband_edges(s);
    const ImageImpedances z = image_impedances(0.5 * e.theta_lo, s);
    EXPECT_NEAR(z.z_i.real(), 0.0, 1e-9);
    EXPECT_GT(std::abs(z.z_i.imag()), 0.0);
}

TEST(Coupler, RejectionAtDesignAndHarmonic) {
    const CoupledLineSpec s;
    EXPECT_NEAR(rejection_estimate(s.f_design, s, 50.0), 0.0, 1e-9);
    EXPECT_GE(rejection_estimate(2.0 * s.f_design, s, 50.0), 15.0);
    EXPECT_LE(rejection_estimate(2.0 * s.f_design, s, 50.0, 40.0), 40.0);
}

TEST(Coupler, RejectionSymmetricInTheta) {
    const CoupledLineSpec s;
    for (double r : {0.2, 0.5, 0.8}) {
        EXPECT_NEAR(rejection_estimate(s.f_design * (1 - r), s, 50.0), rejection_estimate(s.f_design * (1 + r), s, 50.0),
                    1e-9);
    }
}

TEST(Coupler, ValidateRejectsInvertedModes) {
    CoupledLineSpec s;
    s.z_even = 30.0;
    EXPECT_THROW(s.validate(), DomainError);
}
