// cosmo.hpp — Cosmological matching arithmetic: de Sitter mode counting,
// per-mode energy, natural collapse rates, amplification thresholds, bath-size
// scaling exponents, the Doppler shift of the line and interferometric exponents.

#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtdnoise/params.hpp"

namespace gtd::cosmo {

using gtd::de_sitter_count;
using gtd::holographic_mass;

/// Horizon volume (4 pi / 3)(c/H0)^3.
inline double horizon_volume(const PhysicalConstants& k) {
    const double r = k.c / k.H0;
    return 4.0 * std::numbers::pi / 3.0 * r * r * r;
}

/// rho_Lambda times the horizon volume, shared among N_dS modes (J).
inline double energy_per_mode(const PhysicalConstants& k) {
    return k.rho_Lambda * horizon_volume(k) / de_sitter_count(k);
}

/// lambda = H0 C_match.
inline double lambda_natural(const PhysicalConstants& k, double C_match) {
    if (!(C_match > 0)) throw std::invalid_argument("lambda_natural: C_match must be > 0");
    return k.H0 * C_match;
}

struct Threshold {
    double N_star{}; // nucleons for one-second collapse
    double mass{};   // kg
};

/// N_star = (lambda * 1 s)^{-1/2}, mass = N_star m_nucleon.
inline Threshold amplification_threshold(double lambda, double m_nucleon) {
    if (!(lambda > 0)) throw std::invalid_argument("amplification_threshold: lambda must be > 0");
    const double n = 1.0 / std::sqrt(lambda * 1.0);
    return {n, n * m_nucleon};
}

/// g^2 A_J gamma / (m0^2 hbar^2 [(2 omega0)^2 + gamma^2]) V.
inline double markov_surrogate_rate(double g_int, double A_J, double gamma, double omega0, double m0, double hbar,
                                    double V_rC = 1.0) {
    if (!(g_int > 0 && A_J > 0 && gamma > 0 && omega0 > 0 && m0 > 0 && hbar > 0 && V_rC > 0))
        throw std::invalid_argument("markov_surrogate_rate: all inputs must be > 0");
    const double w = 2.0 * omega0;
    return g_int * g_int * A_J * gamma / (m0 * m0 * hbar * hbar * (w * w + gamma * gamma)) * V_rC;
}

enum class BathScaling { divergent, finite, vanishing };

inline const char* to_string(BathScaling s) {
    switch (s) {
    case BathScaling::divergent: return "divergent";
    case BathScaling::finite: return "finite";
    case BathScaling::vanishing: return "vanishing";
    }
    return "?";
}

struct ScalingReport {
    double p{};
    double N1{};
    double exponent{}; // 1 - 4p
    double factor{};   // N1^{1-4p}
    double eta{};      // N1^{-1/2}
    BathScaling classification{};
};

/// Bath noise summed over N1 contributors with vertex g_eff ~ N1^{-p}.
inline ScalingReport am_scaling(double p, double N1) {
    if (!(N1 >= 1)) throw std::invalid_argument("am_scaling: N1 must be >= 1");
    ScalingReport r;
    r.p = p;
    r.N1 = N1;
    r.exponent = 1.0 - 4.0 * p;
    r.factor = std::pow(N1, r.exponent);
    r.eta = 1.0 / std::sqrt(N1);
    constexpr double eps = 1e-12;
    r.classification = r.exponent > eps ? BathScaling::divergent
                       : r.exponent < -eps ? BathScaling::vanishing
                                           : BathScaling::finite;
    return r;
}

inline double doppler_shift(double omega_line, double v_over_c) {
    if (!(std::abs(v_over_c) < 1)) throw std::invalid_argument("doppler_shift: |v/c| must be < 1");
    return omega_line * v_over_c;
}

/// lambda_bench (m/m0)^2 T^2 / (1 s), dimensionless.
inline double t1_exponent(double lambda_bench, double m, double m0, double T) {
    if (!(lambda_bench > 0 && m > 0 && m0 > 0 && T > 0)) throw std::invalid_argument("t1_exponent: inputs must be > 0");
    const double r = m / m0;
    return lambda_bench * r * r * T * T / 1.0;
}

/// Ratio of the natural rate with m_R = m_Pl to that with the holographic
/// mass. Every other factor cancels, leaving (m_hol / m_Pl)^2 = 1 / N_dS.
inline double planck_counterfactual_ratio(const PhysicalConstants& k) {
    GtdInputs in = GtdParams::si_defaults(k).inputs();
    const double a_hol = amplitude_AJ(GtdParams::create(in));
    in.m_R = k.m_Pl;
    in.m_F = k.m_Pl;
    const double a_pl = amplitude_AJ(GtdParams::create(in));
    return a_pl / a_hol;
}

// --- Reports ------------------------------------------------------------------

struct ThresholdRow {
    double C_match{};
    double lambda{};
    double N_star{};
    double mass{};
};

struct MatchReport {
    double N_dS{};
    double eps_per_mode{};
    double m_R_hol{};
    double lambda_natural{};
    double C_match{};
    std::vector<ThresholdRow> thresholds;

    std::string to_csv() const {
        std::ostringstream os;
        os.precision(17);
        os << "C_match,lambda,N_star,mass\n";
        for (const auto& r : thresholds) os << r.C_match << ',' << r.lambda << ',' << r.N_star << ',' << r.mass << '\n';
        return os.str();
    }
};

/// The matching factors tabulated by default: 1, alpha_em^2, 1e-8, 1e-12.
inline std::vector<double> standard_match_factors(const PhysicalConstants& k) {
    return {1.0, k.alpha_em * k.alpha_em, 1e-8, 1e-12};
}

inline MatchReport match_report(const PhysicalConstants& k, double C_match, const std::vector<double>& factors) {
    k.validate();
    MatchReport r;
    r.N_dS = de_sitter_count(k);
    r.eps_per_mode = energy_per_mode(k);
    r.m_R_hol = holographic_mass(k, r.N_dS);
    r.C_match = C_match;
    r.lambda_natural = lambda_natural(k, C_match);
    for (double c : factors) {
        const double lam = lambda_natural(k, c);
        const auto t = amplification_threshold(lam, k.m_nucleon);
        r.thresholds.push_back({c, lam, t.N_star, t.mass});
    }
    return r;
}

inline MatchReport match_report(const PhysicalConstants& k = PhysicalConstants::defaults()) {
    return match_report(k, 1.0, standard_match_factors(k));
}

inline nlohmann::json to_json(const MatchReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& t : r.thresholds)
        rows.push_back({{"C_match", t.C_match}, {"lambda", t.lambda}, {"N_star", t.N_star}, {"mass", t.mass}});
    return {{"N_dS", r.N_dS},
            {"eps_per_mode", r.eps_per_mode},
            {"m_R_hol", r.m_R_hol},
            {"lambda_natural", r.lambda_natural},
            {"C_match", r.C_match},
            {"thresholds", rows}};
}

} // namespace gtd::cosmo
