#include "fixtures.hpp"
#include "ringwave/dispersion.hpp"
#include "ringwave/errors.hpp"
#include "ringwave/parametric.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ringwave;
using ringwave::test::calibrated_ring;

TEST(Parametric, EffectiveElementsClosedForm) {
    const TaylorCoeffs tc = taylor_coefficients(Varactor{});
    const double vp = 0.3, f = 2.4e9;
    const EffectiveElements e = effective_elements(tc, vp, f);
    EXPECT_DOUBLE_EQ(e.c_e, tc.c0 + 0.5 * tc.c2 * vp * vp);
    EXPECT_NEAR(e.r_e, -2.0 / (2 * constants::pi * f * std::abs(tc.c1) * vp), 1e-9);
    EXPECT_TRUE(std::isinf(effective_elements(tc, 0.0, f).r_e));
    EXPECT_LT(effective_elements(tc, 0.0, f).r_e, 0.0);
}

TEST(Parametric, NegativeResistanceWeakensWithPump) {
    const TaylorCoeffs tc = taylor_coefficients(Varactor{});
    EXPECT_GT(std::abs(effective_elements(tc, 0.1, 2.4e9).r_e), std::abs(effective_elements(tc, 0.2, 2.4e9).r_e));
}

TEST(Parametric, NodeAmplitudeMatchesProfile) {
    const RingSpec ring = calibrated_ring();
    const PumpState pump = make_pump_state(ring, 0.4, 4.8e9);
    for (int n = 1; n <= 3; ++n) {
        const double x = 0.5 * (2 * n - 1) * ring.cell.d;
        EXPECT_NEAR(node_pump_amplitude(n, pump), pump_profile_at(x, pump, ring.cell.d), 1e-14) << n;
    }
    EXPECT_THROW(node_pump_amplitude(0, pump), DomainError);
}

TEST(Parametric, PumpPhaseComesFromDispersion) {
    const RingSpec ring = calibrated_ring();
    const PumpState pump = make_pump_state(ring, 1.0, 4.8e9);
    EXPECT_DOUBLE_EQ(pump.beta2_d, loaded_phase(4.8e9, ring.cell).beta_d);
}

TEST(Parametric, NegativeResistanceAtStandingWaveNull) {
    PumpState pump{1.0, 4.8e9, constants::pi};  // cos(pi/2) = 0 at node 1
    const TaylorCoeffs tc = taylor_coefficients(Varactor{});
    EXPECT_LT(node_negative_resistance(1, pump, tc), -1e12);
    pump.v_p0 = 0.0;
    EXPECT_TRUE(std::isinf(node_negative_resistance(1, pump, tc)));
    pump.v_p0 = 1.0;
    pump.beta2_d = 1.0;
    EXPECT_LT(node_negative_resistance(1, pump, tc), 0.0);
}

TEST(Parametric, NltlOptimumForTenthPiMismatch) {
    NltlSpec s;
    s.beta1_d = 1.0;
    s.beta2_d = 2.0 + constants::pi / 10.0;
    EXPECT_EQ(optimal_stage_count(s, 40), 10);  // n = 30 ties with n = 10
    EXPECT_EQ(optimal_stage_count(s, 8), 8);
}

TEST(Parametric, NltlGrowthIsLinearWhenMatched) {
    NltlSpec s;
    s.beta1_d = 1.0;
    s.beta2_d = 2.0;
    const double a1 = std::abs(nltl_harmonic_amplitude(1, 1.0, s));
    for (int n : {2, 5, 17}) EXPECT_NEAR(std::abs(nltl_harmonic_amplitude(n, 1.0, s)) / a1, n, 1e-9);
    // Continuous through a vanishing mismatch.
    NltlSpec t = s;
    t.beta2_d = 2.0 + 1e-9;
    EXPECT_NEAR(std::abs(nltl_harmonic_amplitude(7, 1.0, t)), std::abs(nltl_harmonic_amplitude(7, 1.0, s)), 1e-8);
}

TEST(Parametric, NltlScalesWithDriveSquared) {
    NltlSpec s;
    s.beta1_d = 0.9;
    s.beta2_d = 2.0;
    EXPECT_NEAR(std::abs(nltl_harmonic_amplitude(4, 2.0, s)) / std::abs(nltl_harmonic_amplitude(4, 1.0, s)), 4.0,
                1e-12);
    EXPECT_EQ(nltl_harmonic_amplitude(0, 1.0, s), cplx{0.0});
}

TEST(Parametric, StandingWaveProfileShape) {
    const RingSpec ring = calibrated_ring();
    const PumpState pump = make_pump_state(ring, 0.5, 4.8e9);
    const StandingWaveProfile p = standing_wave_profile(Mode::divider, ring, pump, 101);
    ASSERT_EQ(p.x.size(), 101u);
    EXPECT_DOUBLE_EQ(p.x.front(), -p.x.back());
    EXPECT_NEAR(p.tone_f[50], 0.0, 1e-15);          // f tone vanishes at M
    EXPECT_NEAR(p.tone_2f[50], 2.0 * 0.5, 1e-15);   // 2f antinode at M
    for (std::size_t i = 0; i < p.x.size(); ++i) EXPECT_DOUBLE_EQ(p.tone_2f[i], p.tone_2f[100 - i]);
    EXPECT_THROW(standing_wave_profile(Mode::divider, ring, pump, 4), DomainError);
    const StandingWaveProfile q = standing_wave_profile(Mode::doubler, ring, pump, 101);
    EXPECT_NEAR(q.tone_2f[50], 2.0, 1e-15);
}
