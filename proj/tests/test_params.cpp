// test_params.cpp — Parameter validation, derived amplitudes and JSON files.

#include <gtest/gtest.h>

#include <cmath>

#include "gtdnoise/fock.hpp"
#include "gtdnoise/params.hpp"

using namespace gtd;

namespace {
GtdParams with(auto&& edit) {
    GtdInputs in;
    edit(in);
    return GtdParams::create(in);
}
} // namespace

TEST(Params, NaturalAmplitude) {
    EXPECT_DOUBLE_EQ(amplitude_AJ(GtdParams::natural_defaults()), 0.25);
    EXPECT_DOUBLE_EQ(amplitude_AJ(with([](GtdInputs& in) { in.n_matrix = 2; })), 1.0);
}

TEST(Params, AmplitudeMatchesFockVariance) {
    const auto p = GtdParams::natural_defaults();
    const auto ws = fock::FockWorkspace::fermion_pairs(1);
    const auto c = fock::correlator_JJ(ws, p, 0.0, fock::BathState::vacuum(ws));
    EXPECT_NEAR(c.real(), amplitude_AJ(p), 1e-14);
    EXPECT_NEAR(c.imag(), 0.0, 1e-14);
}

TEST(Params, KappaSquared) {
    EXPECT_DOUBLE_EQ(surrogate_kappa_sq(GtdParams::natural_defaults()), 0.125);
    EXPECT_DOUBLE_EQ(surrogate_kappa_sq(with([](GtdInputs& in) { in.alpha_gtd = 2.0; })), 1.0 / 128.0);
}

TEST(Params, SurrogateMatchingIdentity) {
    for (double m : {0.5, 1.0, 3.0})
        for (double L : {0.7, 1.0, 2.5}) {
            const auto p = with([&](GtdInputs& in) {
                in.m_R = m;
                in.alpha_gtd.reset();
                in.L_aik = L;
                in.n_matrix = 2;
                in.dirac_factor_D = 4.0;
            });
            const double x2 = p.hbar() / (p.m_R() * p.omega0());
            EXPECT_NEAR(2.0 * surrogate_kappa_sq(p) * x2 * x2 / amplitude_AJ(p), 1.0, 1e-12);
        }
}

TEST(Params, AmplitudeHomogeneity) {
    const auto base = GtdParams::natural_defaults();
    const double a0 = amplitude_AJ(base);
    EXPECT_NEAR(amplitude_AJ(with([](GtdInputs& in) { in.m_R = 3.0; })) / a0, 1.0 / 9.0, 1e-14);
    EXPECT_NEAR(amplitude_AJ(with([](GtdInputs& in) { in.units.hbar = 3.0; })) / a0, 9.0, 1e-14);
    // L_aik = alpha c / omega0 shrinks as omega0 grows: omega0^2 at fixed alpha_gtd
    EXPECT_NEAR(amplitude_AJ(with([](GtdInputs& in) { in.omega0 = 2.0; })) / a0, 4.0, 1e-12);
    // and omega0^-2 at fixed length
    EXPECT_NEAR(amplitude_AJ(with([](GtdInputs& in) { in.omega0 = 2.0; in.alpha_gtd.reset(); in.L_aik = 1.0; })) / a0,
                0.25, 1e-12);
}

TEST(Params, LengthDerivedFromCoupling) {
    const auto p = with([](GtdInputs& in) {
        in.units = UnitSystem::si();
        in.omega0 = 2.18e-18;
        in.alpha_gtd = 0.5;
    });
    EXPECT_NEAR(p.L_aik() / (0.5 * 299792458.0 / 2.18e-18), 1.0, 1e-14);
    const auto q = with([](GtdInputs& in) {
        in.alpha_gtd.reset();
        in.L_aik = 4.0;
        in.omega0 = 2.0;
    });
    EXPECT_DOUBLE_EQ(q.alpha_gtd(), 8.0);
}

TEST(Params, Validation) {
    EXPECT_THROW(with([](GtdInputs& in) { in.m_R = 0.0; }), std::invalid_argument);
    EXPECT_THROW(with([](GtdInputs& in) { in.omega0 = -1.0; }), std::invalid_argument);
    EXPECT_THROW(with([](GtdInputs& in) { in.gamma_width = 0.0; }), std::invalid_argument);
    EXPECT_THROW(with([](GtdInputs& in) { in.sigma_branch = 0; }), std::invalid_argument);
    EXPECT_THROW(with([](GtdInputs& in) { in.n_matrix = 0; }), std::invalid_argument);
    EXPECT_THROW(with([](GtdInputs& in) { in.L_aik = 1.5; }), std::invalid_argument); // clashes with alpha_gtd = 1
    EXPECT_THROW(with([](GtdInputs& in) { in.alpha_gtd.reset(); }), std::invalid_argument);
    EXPECT_NO_THROW(with([](GtdInputs& in) { in.L_aik = 1.0; }));
}

TEST(Params, ConstantsValidation) {
    PhysicalConstants k;
    EXPECT_NO_THROW(k.validate());
    k.alpha_em = 1.5;
    EXPECT_THROW(k.validate(), std::invalid_argument);
    k = {};
    k.v_cmb_over_c = 0.0;
    EXPECT_THROW(k.validate(), std::invalid_argument);
}

TEST(Params, HolographicMass) {
    const PhysicalConstants k;
    EXPECT_DOUBLE_EQ(holographic_mass(k, 1.0), k.m_Pl);
    EXPECT_NEAR(holographic_mass(k, de_sitter_count(k)) / 1.443e-69, 1.0, 1e-3);
    EXPECT_THROW(holographic_mass(k, 0.0), std::invalid_argument);
    double prev = INFINITY;
    for (double n = 1.0; n < 1e130; n *= 1e7) {
        const double m = holographic_mass(k, n);
        EXPECT_LT(m, prev);
        prev = m;
    }
}

TEST(Params, JsonRoundTrip) {
    const auto p = with([](GtdInputs& in) {
        in.m_R = 2.0;
        in.n_matrix = 2;
        in.sigma_branch = -1;
        in.gamma_width = 0.3;
    });
    const auto q = params_from_json(to_json(p));
    EXPECT_EQ(to_json(p), to_json(q));
    EXPECT_EQ(q.trace_factor_N(), 4.0);
}

TEST(Params, JsonDefaultsAndRejection) {
    const auto p = params_from_json(nlohmann::json::parse(R"({"n_matrix": 2})"));
    EXPECT_EQ(p.trace_factor_N(), 4.0);
    EXPECT_THROW(params_from_json(nlohmann::json::parse(R"({"m_r": 1})")), std::invalid_argument);
    EXPECT_THROW(params_from_json(nlohmann::json::parse(R"({"unit_system": "cgs"})")), std::invalid_argument);
    const auto s = params_from_json(nlohmann::json::parse(R"({"unit_system": "si"})"));
    EXPECT_DOUBLE_EQ(s.omega0(), 2.18e-18);
    EXPECT_FALSE(s.units().is_natural());
}
