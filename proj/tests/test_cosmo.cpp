// test_cosmo.cpp — Mode counting, per-mode energy, thresholds and scaling.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gtdnoise/cosmo.hpp"

using namespace gtd;
using namespace gtd::cosmo;

namespace {
const PhysicalConstants K = PhysicalConstants::defaults();

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST(Cosmo, DeSitterCount) {
    const double n = de_sitter_count(K);
    EXPECT_LT(rel(n, 2.274e122), 1e-3);
    // independent route: pi c^5 / (hbar G H0^2) with G = hbar c / m_Pl^2
    const double G = K.hbar * K.c / (K.m_Pl * K.m_Pl);
    EXPECT_LT(rel(n, std::numbers::pi * std::pow(K.c, 5) / (K.hbar * G * K.H0 * K.H0)), 1e-12);
}

TEST(Cosmo, EnergyPerModeAndHolographicMass) {
    EXPECT_LT(rel(energy_per_mode(K), 2.539e-53), 1e-3);
    EXPECT_LT(rel(horizon_volume(K), 4.0 / 3.0 * std::numbers::pi * std::pow(K.c / K.H0, 3)), 1e-15);
    const double m = holographic_mass(K, de_sitter_count(K));
    EXPECT_LT(rel(m, 1.443e-69), 1e-3);
    EXPECT_THROW(holographic_mass(K, 0.0), std::invalid_argument);
}

TEST(Cosmo, NaturalRateAndThresholds) {
    EXPECT_DOUBLE_EQ(lambda_natural(K, 1.0), K.H0);
    EXPECT_THROW(lambda_natural(K, 0.0), std::invalid_argument);
    const auto t = amplification_threshold(K.H0, K.m_nucleon);
    EXPECT_LT(rel(t.N_star, 6.773e8), 1e-3);
    EXPECT_LT(rel(t.mass, t.N_star * K.m_nucleon), 1e-15);
    const auto rep = match_report(K);
    ASSERT_EQ(rep.thresholds.size(), 4u);
    EXPECT_DOUBLE_EQ(rep.thresholds[1].C_match, K.alpha_em * K.alpha_em);
    EXPECT_LT(rel(rep.thresholds[3].N_star, 6.773e14), 1e-3);
    for (std::size_t i = 1; i < 4; ++i) EXPECT_GT(rep.thresholds[i].N_star, rep.thresholds[i - 1].N_star);
    const std::string csv = rep.to_csv();
    EXPECT_EQ(csv.rfind("C_match,lambda,N_star,mass\n", 0), 0u);
    EXPECT_EQ(to_json(rep).at("thresholds").size(), 4u);
}

TEST(Cosmo, MarkovSurrogateRate) {
    EXPECT_NEAR(markov_surrogate_rate(1, 1, 1, 1, 1, 1), 1.0 / 5.0, 1e-15);
    EXPECT_NEAR(markov_surrogate_rate(2, 1, 1, 1, 1, 1, 3.0), 12.0 / 5.0, 1e-15);
    EXPECT_THROW(markov_surrogate_rate(1, 1, 0, 1, 1, 1), std::invalid_argument);
}

TEST(Cosmo, BathScaling) {
    EXPECT_EQ(am_scaling(0.25, 1e6).classification, BathScaling::finite);
    EXPECT_EQ(am_scaling(0.0, 1e6).classification, BathScaling::divergent);
    EXPECT_EQ(am_scaling(0.5, 1e6).classification, BathScaling::vanishing);
    EXPECT_NEAR(am_scaling(0.5, 1e6).factor, 1e-6, 1e-18);
    EXPECT_NEAR(am_scaling(0.5, 1e6).eta, 1e-3, 1e-15);
    EXPECT_STREQ(to_string(BathScaling::finite), "finite");
    EXPECT_THROW(am_scaling(0.25, 0.5), std::invalid_argument);
}

TEST(Cosmo, DopplerAndInterferometry) {
    EXPECT_DOUBLE_EQ(doppler_shift(2.0 * K.H0, K.v_cmb_over_c), 2.0 * K.H0 * 1.23e-3);
    EXPECT_THROW(doppler_shift(1.0, 1.0), std::invalid_argument);
    EXPECT_DOUBLE_EQ(t1_exponent(2.0, 3.0, 1.0, 2.0), 72.0);
    EXPECT_THROW(t1_exponent(1.0, 0.0, 1.0, 1.0), std::invalid_argument);
}

TEST(Cosmo, PlanckCounterfactual) {
    const double r = planck_counterfactual_ratio(K);
    EXPECT_LT(rel(r, 1.0 / de_sitter_count(K)), 1e-10);
    EXPECT_LT(rel(r, 4.397e-123), 1e-3);
}
