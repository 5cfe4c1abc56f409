// params.hpp — Physical constants, microscopic parameter sets and the derived
// amplitude scalars shared by every other module.

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace gtd {

/// hbar and c for one consistent unit system. Natural units set both to one
/// and measure frequencies in units of omega0.
struct UnitSystem {
    double hbar{1.0};
    double c{1.0};

    static UnitSystem si() { return {1.054571817e-34, 299792458.0}; }
    static UnitSystem natural() { return {1.0, 1.0}; }

    bool is_natural() const { return hbar == 1.0 && c == 1.0; }
};

struct PhysicalConstants {
    double hbar{1.054571817e-34};   // J s
    double c{299792458.0};          // m/s
    double H0{2.18e-18};            // 1/s
    double rho_Lambda{5.3e-10};     // J/m^3
    double m_Pl{2.176434e-8};       // kg
    double m_nucleon{1.67262192369e-27}; // kg
    double alpha_em{7.2973525693e-3};
    double v_cmb_over_c{1.23e-3};

    static PhysicalConstants defaults() { return {}; }

    void validate() const {
        if (!(hbar > 0 && c > 0 && H0 > 0 && rho_Lambda > 0 && m_Pl > 0 && m_nucleon > 0))
            throw std::invalid_argument("PhysicalConstants: all dimensionful constants must be > 0");
        if (!(alpha_em > 0 && alpha_em < 1))
            throw std::invalid_argument("PhysicalConstants: alpha_em must lie in (0,1)");
        if (!(v_cmb_over_c > 0 && v_cmb_over_c < 1))
            throw std::invalid_argument("PhysicalConstants: v_cmb_over_c must lie in (0,1)");
    }

    UnitSystem units() const { return {hbar, c}; }
};

/// Horizon area in Planck units, pi (c/H0)^2 / L_P^2 with L_P^2 = hbar^2/(m_Pl c)^2.
inline double de_sitter_count(const PhysicalConstants& k) {
    k.validate();
    const double horizon = k.c / k.H0;
    const double planck_length = k.hbar / (k.m_Pl * k.c);
    return std::numbers::pi * horizon * horizon / (planck_length * planck_length);
}

/// Per-de-Sitter-mode mass scale m_Pl / sqrt(N_dS).
inline double holographic_mass(const PhysicalConstants& k, double n_dS) {
    if (!(n_dS > 0)) throw std::invalid_argument("holographic_mass: N_dS must be > 0");
    return k.m_Pl / std::sqrt(n_dS);
}

/// Raw user-facing inputs. Either alpha_gtd or L_aik may be left unset; the
/// other is then derived through L_aik = alpha_gtd c / omega0.
struct GtdInputs {
    UnitSystem units{UnitSystem::natural()};
    double m_R{1.0};
    double omega0{1.0};
    std::optional<double> alpha_gtd{1.0};
    std::optional<double> L_aik{};
    int n_matrix{1};
    std::optional<double> trace_factor_N{}; // defaults to n_matrix^2
    double dirac_factor_D{1.0};
    int sigma_branch{+1};
    double gamma_width{1.0};
    double g_int{1.0};
    std::optional<double> m_F{};             // defaults to m_R
};

/// Validated, immutable parameter set.
class GtdParams {
public:
    static GtdParams create(const GtdInputs& in) {
        GtdParams p;
        p.units_ = in.units;
        p.m_R_ = in.m_R;
        p.omega0_ = in.omega0;
        p.n_matrix_ = in.n_matrix;
        p.dirac_D_ = in.dirac_factor_D;
        p.sigma_ = in.sigma_branch;
        p.gamma_ = in.gamma_width;
        p.g_int_ = in.g_int;

        if (!(in.units.hbar > 0 && in.units.c > 0))
            throw std::invalid_argument("GtdParams: hbar and c must be > 0");
        if (!(in.m_R > 0)) throw std::invalid_argument("GtdParams: m_R must be > 0");
        if (!(in.omega0 > 0)) throw std::invalid_argument("GtdParams: omega0 must be > 0");
        if (!(in.gamma_width > 0)) throw std::invalid_argument("GtdParams: gamma_width must be > 0");
        if (in.n_matrix < 1) throw std::invalid_argument("GtdParams: n_matrix must be >= 1");
        if (in.sigma_branch != 1 && in.sigma_branch != -1)
            throw std::invalid_argument("GtdParams: sigma_branch must be +1 or -1");
        if (!(in.dirac_factor_D > 0)) throw std::invalid_argument("GtdParams: dirac_factor_D must be > 0");

        if (in.alpha_gtd && in.L_aik) {
            const double derived = *in.alpha_gtd * in.units.c / in.omega0;
            if (std::abs(derived - *in.L_aik) > 1e-12 * std::abs(derived))
                throw std::invalid_argument("GtdParams: L_aik inconsistent with alpha_gtd c / omega0");
            p.alpha_gtd_ = *in.alpha_gtd;
        } else if (in.alpha_gtd) {
            p.alpha_gtd_ = *in.alpha_gtd;
        } else if (in.L_aik) {
            p.alpha_gtd_ = *in.L_aik * in.omega0 / in.units.c;
        } else {
            throw std::invalid_argument("GtdParams: one of alpha_gtd or L_aik is required");
        }
        if (!(p.alpha_gtd_ > 0)) throw std::invalid_argument("GtdParams: alpha_gtd must be > 0");
        p.L_aik_ = p.alpha_gtd_ * in.units.c / in.omega0;

        const double n2 = static_cast<double>(in.n_matrix) * in.n_matrix;
        p.trace_N_ = in.trace_factor_N.value_or(n2);
        if (!(p.trace_N_ > 0)) throw std::invalid_argument("GtdParams: trace_factor_N must be > 0");
        p.m_F_ = in.m_F.value_or(in.m_R);
        if (!(p.m_F_ > 0)) throw std::invalid_argument("GtdParams: m_F must be > 0");
        return p;
    }

    /// hbar = m_R = omega0 = L_aik = 1, N = D = 1, gamma = omega0.
    static GtdParams natural_defaults() { return create(GtdInputs{}); }

    /// Hubble-scale working point: omega0 = gamma = H0, alpha_gtd = 1,
    /// m_R = m_F = holographic per-mode mass.
    static GtdParams si_defaults(const PhysicalConstants& k = PhysicalConstants::defaults()) {
        GtdInputs in;
        in.units = k.units();
        in.omega0 = k.H0;
        in.gamma_width = k.H0;
        in.m_R = holographic_mass(k, de_sitter_count(k));
        return create(in);
    }

    GtdInputs inputs() const {
        GtdInputs in;
        in.units = units_;
        in.m_R = m_R_;
        in.omega0 = omega0_;
        in.alpha_gtd = alpha_gtd_;
        in.n_matrix = n_matrix_;
        in.trace_factor_N = trace_N_;
        in.dirac_factor_D = dirac_D_;
        in.sigma_branch = sigma_;
        in.gamma_width = gamma_;
        in.g_int = g_int_;
        in.m_F = m_F_;
        return in;
    }

    const UnitSystem& units() const { return units_; }
    double hbar() const { return units_.hbar; }
    double c() const { return units_.c; }
    double m_R() const { return m_R_; }
    double omega0() const { return omega0_; }
    double alpha_gtd() const { return alpha_gtd_; }
    double L_aik() const { return L_aik_; }
    int n_matrix() const { return n_matrix_; }
    double trace_factor_N() const { return trace_N_; }
    double dirac_factor_D() const { return dirac_D_; }
    int sigma_branch() const { return sigma_; }
    double gamma_width() const { return gamma_; }
    double g_int() const { return g_int_; }
    double m_F() const { return m_F_; }

private:
    GtdParams() = default;

    UnitSystem units_{};
    double m_R_{}, omega0_{}, alpha_gtd_{}, L_aik_{};
    int n_matrix_{1};
    double trace_N_{1.0}, dirac_D_{1.0};
    int sigma_{1};
    double gamma_{}, g_int_{}, m_F_{};
};

/// Equal-time connected variance of the bath current,
/// (hbar / (2 m_R omega0 L_aik^2))^2 * N * D.
inline double amplitude_AJ(const GtdParams& p) {
    if (!(p.m_R() > 0 && p.omega0() > 0 && p.L_aik() > 0))
        throw std::invalid_argument("amplitude_AJ: m_R, omega0 and L_aik must be > 0");
    const double L2 = p.L_aik() * p.L_aik();
    const double base = p.hbar() / (2.0 * p.m_R() * p.omega0() * L2);
    return base * base * p.trace_factor_N() * p.dirac_factor_D();
}

/// Coupling of the bosonic-ghost surrogate J_eff = kappa :X^2:, kappa^2 = N D / (8 L_aik^4).
inline double surrogate_kappa_sq(const GtdParams& p) {
    if (!(p.L_aik() > 0)) throw std::invalid_argument("surrogate_kappa_sq: L_aik must be > 0");
    const double L2 = p.L_aik() * p.L_aik();
    return p.trace_factor_N() * p.dirac_factor_D() / (8.0 * L2 * L2);
}

// --- JSON parameter files ---------------------------------------------------

namespace detail {
inline const char* const kParamKeys[] = {
    "unit_system", "m_R", "omega0", "alpha_gtd", "L_aik", "n_matrix", "trace_factor_N",
    "dirac_factor_D", "sigma_branch", "gamma_width", "g_int", "m_F"};
}

/// Flat JSON object with the GtdParams field names plus an optional
/// "unit_system" ("si" or "natural", default "natural"). Unknown keys throw.
/// Fields left out take the defaults of the chosen unit system.
inline GtdParams params_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("parameter file must hold a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (const char* k : detail::kParamKeys) known = known || key == k;
        if (!known) throw std::invalid_argument("unknown parameter key: " + key);
    }
    const std::string system = j.value("unit_system", std::string("natural"));
    GtdInputs in;
    if (system == "si") {
        in = GtdParams::si_defaults().inputs();
    } else if (system != "natural") {
        throw std::invalid_argument("unit_system must be \"si\" or \"natural\"");
    }
    const bool has_alpha = j.contains("alpha_gtd");
    const bool has_L = j.contains("L_aik");
    if (j.contains("m_R")) {
        in.m_R = j.at("m_R").get<double>();
        if (!j.contains("m_F")) in.m_F.reset();
    }
    if (j.contains("omega0")) in.omega0 = j.at("omega0").get<double>();
    if (has_alpha || has_L) {
        in.alpha_gtd = has_alpha ? std::optional<double>(j.at("alpha_gtd").get<double>()) : std::nullopt;
        in.L_aik = has_L ? std::optional<double>(j.at("L_aik").get<double>()) : std::nullopt;
    }
    if (j.contains("n_matrix")) {
        in.n_matrix = j.at("n_matrix").get<int>();
        if (!j.contains("trace_factor_N")) in.trace_factor_N.reset();
    }
    if (j.contains("trace_factor_N")) in.trace_factor_N = j.at("trace_factor_N").get<double>();
    if (j.contains("dirac_factor_D")) in.dirac_factor_D = j.at("dirac_factor_D").get<double>();
    if (j.contains("sigma_branch")) in.sigma_branch = j.at("sigma_branch").get<int>();
    if (j.contains("gamma_width")) in.gamma_width = j.at("gamma_width").get<double>();
    if (j.contains("g_int")) in.g_int = j.at("g_int").get<double>();
    if (j.contains("m_F")) in.m_F = j.at("m_F").get<double>();
    return GtdParams::create(in);
}

inline nlohmann::json to_json(const GtdParams& p) {
    return {
        {"unit_system", p.units().is_natural() ? "natural" : "si"},
        {"m_R", p.m_R()},
        {"omega0", p.omega0()},
        {"alpha_gtd", p.alpha_gtd()},
        {"L_aik", p.L_aik()},
        {"n_matrix", p.n_matrix()},
        {"trace_factor_N", p.trace_factor_N()},
        {"dirac_factor_D", p.dirac_factor_D()},
        {"sigma_branch", p.sigma_branch()},
        {"gamma_width", p.gamma_width()},
        {"g_int", p.g_int()},
        {"m_F", p.m_F()},
    };
}

inline nlohmann::json to_json(const PhysicalConstants& k) {
    return {{"hbar", k.hbar},           {"c", k.c},
            {"H0", k.H0},               {"rho_Lambda", k.rho_Lambda},
            {"m_Pl", k.m_Pl},           {"m_nucleon", k.m_nucleon},
            {"alpha_em", k.alpha_em},   {"v_cmb_over_c", k.v_cmb_over_c}};
}

} // namespace gtd
