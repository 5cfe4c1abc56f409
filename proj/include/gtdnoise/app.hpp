// app.hpp — Command-line front end: table reproduction, verification suites,
// dephasing curves, parameter scans and spectrum dumps. Everything here writes
// to caller-supplied streams so the commands can be driven from tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include "gtdnoise/cosmo.hpp"
#include "gtdnoise/dephasing.hpp"
#include "gtdnoise/dynamics.hpp"
#include "gtdnoise/fock.hpp"
#include "gtdnoise/params.hpp"
#include "gtdnoise/spectral.hpp"

#ifndef GTDNOISE_VERSION
#define GTDNOISE_VERSION "0.1.0"
#endif

namespace gtd::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

struct Tolerances {
    double wick{1e-10};
    double hasvac{1e-12};
    double hasvac_formula{1e-10};
    double bateman{1e-10};
    double dephasing{1e-8};
    double cp{1e-10};
};

struct RunConfig {
    std::string command;
    std::string target;                 // table name, suite name or model name
    std::string params_file;            // empty: defaults
    std::string format{"csv"};
    std::uint64_t seed{20240601};
    int sig_figs{0};                    // 0: full precision
    Tolerances tol{};

    // dephase
    std::string T_grid{"0:10:11"};
    double AJ{0.25};
    double omega0{1.0};
    double gamma{0.1};
    std::size_t mc_samples{0};

    // scan
    std::string scan_param{"gamma"};
    std::string scan_range{};
    std::string observable{"S0"};
    bool log_grid{false};

    // spectrum
    double n_b{0.0}, n_d{0.0}, n_B{0.0};
    double broaden{0.0};
};

// --- Output -------------------------------------------------------------------

using Cell = std::variant<double, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string format_number(double v, int sig_figs) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", sig_figs > 0 ? sig_figs : 17, v);
    return buf;
}

inline nlohmann::json metadata(const RunConfig& cfg, const nlohmann::json& resolved) {
    return {{"tool", "gtdnoise"},
            {"version", GTDNOISE_VERSION},
            {"command", cfg.command},
            {"target", cfg.target},
            {"seed", cfg.seed},
            {"format", cfg.format},
            {"sig_figs", cfg.sig_figs},
            {"tolerances",
             {{"wick", cfg.tol.wick},
              {"hasvac", cfg.tol.hasvac},
              {"hasvac_formula", cfg.tol.hasvac_formula},
              {"bateman", cfg.tol.bateman},
              {"dephasing", cfg.tol.dephasing},
              {"cp", cfg.tol.cp}}},
            {"config", resolved}};
}

inline void emit(const Table& t, const RunConfig& cfg, const nlohmann::json& meta, std::ostream& out) {
    auto cell_text = [&](const Cell& c) -> std::string {
        if (auto d = std::get_if<double>(&c)) return format_number(*d, cfg.sig_figs);
        if (auto b = std::get_if<bool>(&c)) return *b ? "true" : "false";
        return std::get<std::string>(c);
    };
    if (cfg.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : t.rows) {
            nlohmann::json o = nlohmann::json::object();
            for (std::size_t i = 0; i < t.columns.size(); ++i) {
                const Cell& c = r.at(i);
                if (auto d = std::get_if<double>(&c))
                    o[t.columns[i]] = cfg.sig_figs > 0 ? std::strtod(format_number(*d, cfg.sig_figs).c_str(), nullptr) : *d;
                else if (auto b = std::get_if<bool>(&c))
                    o[t.columns[i]] = *b;
                else
                    o[t.columns[i]] = std::get<std::string>(c);
            }
            rows.push_back(o);
        }
        out << nlohmann::json{{"metadata", meta}, {"rows", rows}}.dump(2) << '\n';
        return;
    }
    out << "# " << meta.dump() << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << cell_text(r[i]);
        out << '\n';
    }
}

// --- Parameter resolution -------------------------------------------------------

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open parameter file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("parameter file is not valid JSON: " + std::string(e.what()));
    }
}

/// Parameters from --params, otherwise `fallback`.
inline GtdParams resolve_params(const RunConfig& cfg, const GtdParams& fallback) {
    if (cfg.params_file.empty()) return fallback;
    return params_from_json(read_json_file(cfg.params_file));
}

// --- Grids --------------------------------------------------------------------

/// "a,b,c" or "lo:hi:n" (n evenly spaced points; geometric with `log`).
inline std::vector<double> parse_grid(const std::string& spec, bool log = false) {
    if (spec.empty()) throw std::invalid_argument("empty grid");
    std::vector<double> out;
    auto to_double = [](const std::string& s) {
        std::size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("invalid grid value: '" + s + "'");
        }
        if (pos != s.size()) throw std::invalid_argument("invalid grid value: '" + s + "'");
        return v;
    };
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
        if (parts.size() != 3) throw std::invalid_argument("range must be lo:hi:n");
        const double lo = to_double(parts[0]), hi = to_double(parts[1]);
        const double nd = to_double(parts[2]);
        if (!(nd >= 1) || nd != std::floor(nd)) throw std::invalid_argument("range point count must be a positive integer");
        const auto n = static_cast<std::size_t>(nd);
        if (hi < lo) throw std::invalid_argument("range is empty (hi < lo)");
        if (log && !(lo > 0)) throw std::invalid_argument("logarithmic range needs lo > 0");
        for (std::size_t i = 0; i < n; ++i) {
            const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
            out.push_back(log ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo));
        }
    } else {
        std::stringstream ss(spec);
        for (std::string item; std::getline(ss, item, ',');) out.push_back(to_double(item));
    }
    if (out.empty()) throw std::invalid_argument("empty grid");
    return out;
}

// --- tables ---------------------------------------------------------------------

struct BandRow {
    const char* band;
    double omega_S;
};

/// Angular frequencies of the laboratory bands: 2 pi f, and E/hbar for 1 keV.
inline std::vector<BandRow> laboratory_bands(const PhysicalConstants& k) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double keV = 1.602176634e-16; // J
    return {{"pulsar_timing_1nHz", two_pi * 1e-9},
            {"lisa_1mHz", two_pi * 1e-3},
            {"mechanical_1Hz", two_pi * 1.0},
            {"mechanical_1kHz", two_pi * 1e3},
            {"xray_1keV", keV / k.hbar}};
}

inline Table suppression_table(const PhysicalConstants& k) {
    Table t{{"band", "omega_S", "suppression"}, {}};
    for (const auto& b : laboratory_bands(k))
        t.rows.push_back({std::string(b.band), b.omega_S, spectral::offres_suppression(b.omega_S, k.H0, k.H0)});
    return t;
}

inline const std::vector<double>& populated_rows() {
    static const std::vector<double> rows{1.0, 2.0 * std::numbers::pi, 0.1};
    return rows;
}

inline Table populated_table() {
    Table t{{"beta_hbar_omega0", "n_F", "backward_over_forward", "pedestal_over_AJ"}, {}};
    for (double x : populated_rows()) {
        const auto r = spectral::thermal_fermion_row(x);
        t.rows.push_back({r.beta_hbar_omega0, r.n_F, r.backward_over_forward, r.pedestal_over_AJ});
    }
    return t;
}

inline Table thresholds_table(const PhysicalConstants& k) {
    const auto rep = cosmo::match_report(k);
    Table t{{"C_match", "lambda", "N_star", "mass"}, {}};
    for (const auto& r : rep.thresholds) t.rows.push_back({r.C_match, r.lambda, r.N_star, r.mass});
    return t;
}

// --- verify ---------------------------------------------------------------------

struct Check {
    std::string suite;
    std::string name;
    double residual{};
    double tolerance{};
    bool pass{};
};

struct CheckList {
    std::vector<Check> checks;

    void le(const std::string& suite, const std::string& name, double residual, double tol) {
        checks.push_back({suite, name, residual, tol, residual <= tol});
    }
    /// Passes when value > 0; the residual column carries the value itself.
    void positive(const std::string& suite, const std::string& name, double value) {
        checks.push_back({suite, name, value, 0.0, value > 0});
    }
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

namespace detail {
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// D(T) = 2 \int_0^T (T - tau) C(tau) dtau by adaptive Gauss-Kronrod.
inline double quadrature_kernel(double A, double Omega, double gamma, double T) {
    if (T == 0) return 0.0;
    auto f = [&](double tau) { return (T - tau) * A * std::exp(-gamma * tau) * std::cos(Omega * tau); };
    return 2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, T, 15, 1e-12);
}
} // namespace detail

inline void verify_wick(CheckList& cl, const GtdParams& base, std::uint64_t seed, const Tolerances& tol) {
    std::mt19937_64 rng(seed);
    const std::string s = "wick";
    const std::size_t pairs = static_cast<std::size_t>(base.n_matrix()) * base.n_matrix();
    if (pairs > 4) throw std::invalid_argument("verify wick: n_matrix must be <= 2 for the dense oracle");
    const auto ws = fock::FockWorkspace::fermion_pairs(pairs);
    const auto vac = fock::BathState::vacuum(ws);
    const double w0 = base.omega0();

    for (int sigma : {+1, -1}) {
        GtdInputs in = base.inputs();
        in.sigma_branch = sigma;
        const auto p = GtdParams::create(in);
        const double A = amplitude_AJ(p);
        double worst = 0.0, worst_sym = 0.0, worst_comm = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double tau = detail::uniform(rng, -10.0, 10.0) / w0;
            const auto c = fock::correlator_JJ(ws, p, tau, vac);
            const auto cm = fock::correlator_JJ(ws, p, -tau, vac);
            worst = std::max(worst, std::abs(c - A * std::polar(1.0, -2.0 * sigma * w0 * tau)) / A);
            worst_sym = std::max(worst_sym, std::abs(0.5 * (c + cm) - spectral::csym(p, tau)) / A);
            worst_comm = std::max(worst_comm, std::abs((c - cm) - spectral::commutator_kernel(p, tau)) / A);
        }
        const std::string tag = sigma > 0 ? "plus" : "minus";
        cl.le(s, "vacuum_line_branch_" + tag, worst, tol.wick);
        cl.le(s, "symmetrized_branch_" + tag, worst_sym, tol.wick);
        cl.le(s, "commutator_branch_" + tag, worst_comm, tol.wick);
    }

    {
        const double A = amplitude_AJ(base);
        double worst = 0.0, worst_eq = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double nb = detail::uniform(rng, 0.0, 1.0), nd = detail::uniform(rng, 0.0, 1.0);
            std::vector<double> occ;
            for (std::size_t a = 0; a < pairs; ++a) {
                occ.push_back(nb);
                occ.push_back(nd);
            }
            const auto st = fock::BathState::diagonal_product(ws, occ);
            const double tau = detail::uniform(rng, -10.0, 10.0) / w0;
            const auto model = spectral::populated_fermion_model(base, nb, nd);
            worst = std::max(worst, std::abs(fock::correlator_JJ(ws, base, tau, st) - model.correlator(tau)) / A);
            // thermal: equal occupations leave the equal-time variance at A_J
            const auto th = fock::BathState::diagonal_product(ws, std::vector<double>(2 * pairs, nb));
            worst_eq = std::max(worst_eq, std::abs(fock::correlator_JJ(ws, base, 0.0, th) - A) / A);
        }
        cl.le(s, "populated_general", worst, tol.wick);
        cl.le(s, "equal_time_variance_fixed", worst_eq, tol.wick);
    }

    {
        const auto bs = fock::FockWorkspace({fock::ModeSpec::boson(7)});
        const double x2 = base.hbar() / (base.m_R() * base.omega0());
        const double amp = 2.0 * surrogate_kappa_sq(base) * x2 * x2;
        const double A = amplitude_AJ(base);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double tau = detail::uniform(rng, -10.0, 10.0) / w0;
            worst = std::max(worst, std::abs(fock::correlator_surrogate(bs, base, tau) - amp * std::polar(1.0, 2.0 * w0 * tau)) / amp);
        }
        cl.le(s, "surrogate_vacuum", worst, tol.wick);
        cl.le(s, "surrogate_matches_AJ", std::abs(amp - A) / A, 1e-12);

        const auto big = fock::FockWorkspace({fock::ModeSpec::boson(48)});
        double worst_th = 0.0;
        for (double x : {1.0, 2.0 * std::numbers::pi}) {
            const double n = spectral::bose_occupation(x);
            const auto st = fock::BathState::diagonal_product(big, {n});
            const auto model = spectral::populated_boson_model(base, n);
            for (double tau : {0.0, 0.37 / w0, 1.9 / w0})
                worst_th = std::max(worst_th, std::abs(fock::correlator_surrogate(big, base, tau, st) - model.correlator(tau)) / A);
        }
        cl.le(s, "surrogate_thermal", worst_th, tol.wick);
    }
}

inline void verify_hasvac(CheckList& cl, std::uint64_t seed, const Tolerances& tol) {
    std::mt19937_64 rng(seed ^ 0x4841u);
    const std::string s = "hasvac";
    cl.le(s, "matched_masses_vanish", fock::check_has_vacuum(1.0, 1.0, 1.0, 7), tol.hasvac);
    double worst = 0.0, worst_swap = 0.0;
    double smallest = INFINITY;
    for (int i = 0; i < 20; ++i) {
        const double ratio = std::exp(detail::uniform(rng, -3.0, 3.0));
        const double mR = 1.0, mF = ratio;
        const double expected = std::abs(std::sqrt(mR / mF) - std::sqrt(mF / mR)) / std::sqrt(2.0);
        const double got = fock::check_has_vacuum(mF, mR, 1.0, 7);
        worst = std::max(worst, std::abs(got - expected));
        worst_swap = std::max(worst_swap, std::abs(got - fock::check_has_vacuum(mR, mF, 1.0, 7)));
        smallest = std::min(smallest, got);
    }
    cl.le(s, "coefficient_formula", worst, tol.hasvac_formula);
    cl.le(s, "exchange_symmetry", worst_swap, tol.hasvac_formula);
    cl.positive(s, "mismatched_masses_nonzero", smallest);
}

inline void verify_bateman(CheckList& cl, std::uint64_t seed, const Tolerances& tol) {
    std::mt19937_64 rng(seed ^ 0x4241u);
    const std::string s = "bateman";
    double dev = 0.0, plus = 0.0, minus = 0.0, ghost = 0.0, floor_err = 0.0;
    for (std::size_t levels = 4; levels <= 7; ++levels) {
        const double tau = detail::uniform(rng, -5.0, 5.0);
        const auto r = fock::bateman_check(levels, tau);
        dev = std::max(dev, r.max_sector_deviation);
        plus = std::max(plus, r.plus_phase_residual);
        minus = std::max(minus, r.minus_phase_residual);
        ghost = std::max(ghost, std::abs(r.minus_ghost_element - std::polar(1.0, tau)));
        floor_err = std::max(floor_err, std::abs(r.number_form_min_eigenvalue + static_cast<double>(levels - 1)));
    }
    const auto r4 = fock::bateman_check(4, 0.0);
    double missing = 0.0;
    for (int e = -2; e <= 2; ++e) {
        double best = INFINITY;
        for (double v : r4.sector_eigenvalues) best = std::min(best, std::abs(v - e));
        missing = std::max(missing, best);
    }
    cl.le(s, "sector_spectrum", dev, tol.bateman);
    cl.le(s, "eigenvalues_minus2_to_plus2", missing, tol.bateman);
    cl.le(s, "plus_phase", plus, tol.bateman);
    cl.le(s, "minus_phase_time_reversed", minus, tol.bateman);
    cl.le(s, "ghost_matrix_element", ghost, tol.bateman);
    cl.le(s, "unbounded_below", floor_err, 0.0);
}

inline void verify_dephasing(CheckList& cl, std::uint64_t seed, const Tolerances& tol) {
    std::mt19937_64 rng(seed ^ 0x4450u);
    const std::string s = "dephasing";
    double worst_b = 0.0, worst_e = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double A = detail::uniform(rng, 0.1, 2.0), g = detail::uniform(rng, 0.01, 3.0);
        const double W = detail::uniform(rng, 0.1, 5.0), T = detail::uniform(rng, 0.05, 10.0);
        const double qb = detail::quadrature_kernel(A, W, g, T);
        worst_b = std::max(worst_b, std::abs(dephasing::d_broadened(A, W, g, T) - qb) / qb);
        const double qe = detail::quadrature_kernel(A, W, 0.0, T);
        if (qe > 1e-6 * A * T * T) worst_e = std::max(worst_e, std::abs(dephasing::d_exact(A, W / 2.0, T) - qe) / qe);
    }
    cl.le(s, "broadened_vs_quadrature", worst_b, tol.dephasing);
    cl.le(s, "exact_vs_quadrature", worst_e, tol.dephasing);
    cl.le(s, "gamma_to_zero_limit",
          std::abs(dephasing::d_broadened(1.0, 2.0, 1e-8, 1.0) - dephasing::d_exact(1.0, 1.0, 1.0)), 1e-8);
    cl.le(s, "short_time_series",
          std::abs(dephasing::short_time_expansion(1.0, 2.0, 1.0, 0.01) - dephasing::d_broadened(1.0, 2.0, 1.0, 0.01)), 1e-10);
    {
        const double A = 1.0, g = 1.0, W = 2.0, T = 1e4 / g;
        const double slope = dephasing::d_broadened(A, W, g, T) / T;
        const double s0 = 2.0 * A * g / (g * g + W * W);
        cl.le(s, "long_time_slope", std::abs(slope - s0) / s0, 1e-4);
    }
    {
        double worst = 0.0;
        for (double T : {0.1, 0.5, 1.0, 2.0, 3.0}) {
            auto f_re = [&](double t) { return std::cos(2.0 * t); };
            auto f_im = [&](double t) { return std::sin(2.0 * t); };
            const double re = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f_re, 0.0, T, 15, 1e-14);
            const double im = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f_im, 0.0, T, 15, 1e-14);
            worst = std::max(worst, std::abs(re * re + im * im - dephasing::route_b_exponent(1.0, T)));
        }
        cl.le(s, "route_b_modulus", worst, 1e-10);
    }
    {
        double worst_sigma = 0.0;
        const std::pair<double, double> pts[] = {{1.0, 0.3}, {2.0, 0.7}, {0.5, 1.2}, {3.0, 0.25}, {1.5, 2.0}};
        std::uint64_t k = 0;
        for (auto [amb, T] : pts) {
            const auto e = dephasing::mc_coherence(amb, 0.25, 1.0, T, 100000, dephasing::splitmix64(seed, 100 + k++));
            const double exact = dephasing::coherence_ratio(amb, 0.25, 1.0, 0.0, T);
            worst_sigma = std::max(worst_sigma, std::abs(e.mean - exact) / e.stderr_);
        }
        cl.le(s, "monte_carlo_kraus_average_sigmas", worst_sigma, 3.0);
    }
}

inline void verify_cp(CheckList& cl, std::uint64_t seed, const Tolerances& tol) {
    using dynamics::Matrix;
    std::mt19937_64 rng(seed ^ 0x4350u);
    const std::string s = "cp";
    const auto p = GtdParams::natural_defaults();
    std::normal_distribution<double> normal;
    auto random_matrix = [&](Eigen::Index d) {
        Matrix m(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) m(i, j) = {normal(rng), normal(rng)};
        return m;
    };

    double worst = INFINITY, worst_tp = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Eigen::Index d = 2 + static_cast<Eigen::Index>(i % 2);
        std::vector<dynamics::JumpOperator> ops;
        const int n_ops = 1 + i % 3;
        const double omega = detail::uniform(rng, -4.0, 2.0);
        for (int j = 0; j < n_ops; ++j) {
            dynamics::JumpOperator op;
            op.M = random_matrix(d) * 0.5;
            op.omega_S = j % 2 == 0 ? omega : omega + 1.0;
            op.site = dynamics::Point(detail::uniform(rng, -1, 1), detail::uniform(rng, -1, 1), detail::uniform(rng, -1, 1));
            ops.push_back(op);
        }
        const auto kernel = i % 2 == 0 ? dynamics::SpatialKernel::gaussian(detail::uniform(rng, 0.1, 2.0))
                                       : dynamics::SpatialKernel::constant(detail::uniform(rng, 0.1, 2.0));
        dynamics::LindbladOptions opt;
        const Matrix h = random_matrix(d);
        opt.hamiltonian = Matrix(0.5 * (h + h.adjoint()));
        const auto L = dynamics::lindblad_generator(ops, kernel, p, opt);
        const auto v = dynamics::cp_check(dynamics::choi_of(L, detail::uniform(rng, 0.0, 5.0)));
        worst = std::min(worst, v.min_eigenvalue);
        worst_tp = std::max(worst_tp, v.trace_preservation_residual);
    }
    cl.le(s, "lindblad_maps_cp", std::max(0.0, -worst), tol.cp);
    cl.le(s, "lindblad_maps_trace_preserving", worst_tp, 1e-9);

    {
        Matrix sz = Matrix::Zero(2, 2);
        sz(0, 0) = 1.0;
        sz(1, 1) = -1.0;
        dynamics::LindbladOptions opt;
        opt.dissipator_sign = -1.0;
        const auto L = dynamics::lindblad_generator({{sz, -2.0 * p.omega0(), dynamics::Point::Zero()}},
                                                    dynamics::SpatialKernel::constant(), p, opt);
        const auto v = dynamics::cp_check(dynamics::choi_of(L, 1.0));
        cl.positive(s, "negative_control_detected", -v.min_eigenvalue - 1e-3);
    }
    {
        double worst_g = INFINITY;
        for (int i = 0; i < 50; ++i) {
            const auto ch = dynamics::gaussian_dephasing_channel(1.0, -1.0, detail::uniform(rng, 0.0, 100.0));
            worst_g = std::min(worst_g, dynamics::cp_check(ch).min_eigenvalue);
        }
        cl.le(s, "gaussian_dephasing_channel_cp", std::max(0.0, -worst_g), tol.cp);
    }
    {
        // rigid translation of a three-point body by 10 r_C
        const double rC = 1.0, shift = 10.0;
        dynamics::MassDistribution a, b;
        const double xs[] = {0.0, 0.3, 0.7};
        for (double x : xs) {
            a.points.emplace_back(x, 0, 0);
            a.masses.push_back(1.0);
            b.points.emplace_back(x, 0, 0);
            b.masses.push_back(0.0);
        }
        for (double x : xs) {
            a.points.emplace_back(x + shift, 0, 0);
            a.masses.push_back(0.0);
            b.points.emplace_back(x + shift, 0, 0);
            b.masses.push_back(1.0);
        }
        const double dg = dynamics::homogeneous_obstruction_check(a, b, dynamics::SpatialKernel::gaussian(rC));
        const double dc = dynamics::homogeneous_obstruction_check(a, b, dynamics::SpatialKernel::constant());
        cl.le(s, "homogeneous_kernel_obstruction", std::abs(dc) / dg, 1e-12);
        cl.positive(s, "gaussian_kernel_decoheres", dg);
    }
}

inline CheckList run_verify(const std::string& suite, const GtdParams& p, std::uint64_t seed, const Tolerances& tol) {
    CheckList cl;
    const bool all = suite == "all";
    if (all || suite == "wick") verify_wick(cl, p, seed, tol);
    if (all || suite == "hasvac") verify_hasvac(cl, seed, tol);
    if (all || suite == "bateman") verify_bateman(cl, seed, tol);
    if (all || suite == "dephasing") verify_dephasing(cl, seed, tol);
    if (all || suite == "cp") verify_cp(cl, seed, tol);
    if (cl.checks.empty()) throw std::invalid_argument("unknown verification suite: " + suite);
    return cl;
}

// --- scan -----------------------------------------------------------------------

inline const std::vector<std::string>& scan_observables() {
    static const std::vector<std::string> v{"suppression", "lambda_natural", "S0", "threshold_N", "t1_exponent"};
    return v;
}

inline const std::vector<std::string>& scan_parameters() {
    static const std::vector<std::string> v{"omega_S", "omega0", "gamma", "C_match", "m", "T", "AJ"};
    return v;
}

/// Scalars the scan observables depend on, seeded from the parameter set.
struct ScanPoint {
    std::map<std::string, double> values;

    static ScanPoint from(const GtdParams& p, const PhysicalConstants& k) {
        ScanPoint s;
        s.values = {{"omega_S", 2.0 * std::numbers::pi},
                    {"omega0", p.omega0()},
                    {"gamma", p.gamma_width()},
                    {"C_match", k.alpha_em * k.alpha_em},
                    {"m", 1e-22},
                    {"T", 1.0},
                    {"AJ", amplitude_AJ(p)}};
        return s;
    }

    double observable(const std::string& name, const PhysicalConstants& k) const {
        const auto& v = values;
        if (name == "suppression") return spectral::offres_suppression(v.at("omega_S"), v.at("omega0"), v.at("gamma"));
        if (name == "lambda_natural") return cosmo::lambda_natural(k, v.at("C_match"));
        if (name == "S0") {
            const double w = 2.0 * v.at("omega0"), g = v.at("gamma");
            return 2.0 * v.at("AJ") * g / (w * w + g * g);
        }
        if (name == "threshold_N") return cosmo::amplification_threshold(cosmo::lambda_natural(k, v.at("C_match")), k.m_nucleon).N_star;
        if (name == "t1_exponent")
            return cosmo::t1_exponent(cosmo::lambda_natural(k, v.at("C_match")), v.at("m"), k.m_nucleon, v.at("T"));
        throw std::invalid_argument("unknown observable: " + name);
    }
};

// --- Driver ---------------------------------------------------------------------

inline nlohmann::json command_options(const RunConfig& cfg) {
    if (cfg.command == "dephase")
        return {{"T_grid", cfg.T_grid}, {"AJ", cfg.AJ}, {"omega0", cfg.omega0}, {"gamma", cfg.gamma}, {"mc_samples", cfg.mc_samples}};
    if (cfg.command == "scan")
        return {{"param", cfg.scan_param}, {"range", cfg.scan_range}, {"observable", cfg.observable}, {"log", cfg.log_grid}};
    if (cfg.command == "spectrum")
        return {{"model", cfg.target}, {"n_b", cfg.n_b}, {"n_d", cfg.n_d}, {"n_B", cfg.n_B}, {"broaden", cfg.broaden}};
    return nlohmann::json::object();
}

/// Executes a parsed configuration. Returns the process exit code.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.format != "csv" && cfg.format != "json") throw std::invalid_argument("format must be csv or json");
        const auto k = PhysicalConstants::defaults();
        nlohmann::json resolved{{"constants", to_json(k)}, {"options", command_options(cfg)}};

        if (cfg.command == "tables") {
            Table t;
            if (cfg.target == "suppression") t = suppression_table(k);
            else if (cfg.target == "populated") t = populated_table();
            else if (cfg.target == "thresholds") t = thresholds_table(k);
            else throw std::invalid_argument("unknown table: " + cfg.target);
            emit(t, cfg, metadata(cfg, resolved), out);
            return kExitOk;
        }

        if (cfg.command == "verify") {
            const auto p = resolve_params(cfg, GtdParams::natural_defaults());
            resolved["params"] = to_json(p);
            const auto cl = run_verify(cfg.target, p, cfg.seed, cfg.tol);
            Table t{{"suite", "check", "residual", "tolerance", "pass"}, {}};
            for (const auto& c : cl.checks) t.rows.push_back({c.suite, c.name, c.residual, c.tolerance, c.pass});
            auto meta = metadata(cfg, resolved);
            meta["all_pass"] = cl.all_pass();
            emit(t, cfg, meta, out);
            return cl.all_pass() ? kExitOk : kExitVerifyFailed;
        }

        if (cfg.command == "dephase") {
            const auto grid = parse_grid(cfg.T_grid);
            for (double T : grid)
                if (T < 0) throw std::invalid_argument("T grid values must be >= 0");
            if (!(cfg.omega0 > 0) || cfg.gamma < 0 || cfg.AJ < 0) throw std::invalid_argument("invalid dephasing parameters");
            Table t{{"T", "D_exact", "D_broadened", "regime"}, {}};
            if (cfg.mc_samples > 0) {
                t.columns.push_back("mc_estimate");
                t.columns.push_back("mc_stderr");
            }
            std::uint64_t idx = 0;
            for (double T : grid) {
                const double W = 2.0 * cfg.omega0;
                std::vector<Cell> row{T, dephasing::d_exact(cfg.AJ, cfg.omega0, T), dephasing::d_broadened(cfg.AJ, W, cfg.gamma, T),
                                      std::string(dephasing::to_string(dephasing::classify(T, W, cfg.gamma)))};
                if (cfg.mc_samples > 0) {
                    const auto e = dephasing::mc_kernel(cfg.AJ, cfg.omega0, T, cfg.mc_samples, dephasing::splitmix64(cfg.seed, idx));
                    row.push_back(e.mean);
                    row.push_back(e.stderr_);
                }
                ++idx;
                t.rows.push_back(std::move(row));
            }
            emit(t, cfg, metadata(cfg, resolved), out);
            return kExitOk;
        }

        if (cfg.command == "scan") {
            const auto p = resolve_params(cfg, GtdParams::si_defaults(k));
            resolved["params"] = to_json(p);
            auto point = ScanPoint::from(p, k);
            if (!point.values.count(cfg.scan_param)) throw std::invalid_argument("unknown scan parameter: " + cfg.scan_param);
            bool known = false;
            for (const auto& o : scan_observables()) known = known || o == cfg.observable;
            if (!known) throw std::invalid_argument("unknown observable: " + cfg.observable);
            resolved["base_point"] = point.values;
            const auto grid = parse_grid(cfg.scan_range, cfg.log_grid);
            Table t{{cfg.scan_param, cfg.observable}, {}};
            for (double x : grid) {
                point.values[cfg.scan_param] = x;
                t.rows.push_back({x, point.observable(cfg.observable, k)});
            }
            emit(t, cfg, metadata(cfg, resolved), out);
            return kExitOk;
        }

        if (cfg.command == "spectrum") {
            const auto p = resolve_params(cfg, GtdParams::si_defaults(k));
            resolved["params"] = to_json(p);
            spectral::SpectrumModel m;
            if (cfg.target == "wightman") m = spectral::wightman_line(p);
            else if (cfg.target == "symmetrized") m = spectral::symmetrized_model(p);
            else if (cfg.target == "fermion") m = spectral::populated_fermion_model(p, cfg.n_b, cfg.n_d);
            else if (cfg.target == "boson") m = spectral::populated_boson_model(p, cfg.n_B);
            else throw std::invalid_argument("unknown spectrum model: " + cfg.target);
            if (cfg.broaden > 0) m = m.broadened(cfg.broaden);
            if (cfg.format == "json") {
                out << nlohmann::json{{"metadata", metadata(cfg, resolved)}, {"spectrum", spectral::to_json(m)}}.dump(2) << '\n';
            } else {
                Table t{{"kind", "weight", "center", "width"}, {}};
                for (const auto& l : m.delta_lines) t.rows.push_back({std::string("delta"), l.weight, l.center, 0.0});
                for (const auto& l : m.lorentzians) t.rows.push_back({std::string("lorentzian"), l.area, l.center, l.width});
                t.rows.push_back({std::string("pedestal"), m.pedestal_weight, 0.0, 0.0});
                emit(t, cfg, metadata(cfg, resolved), out);
            }
            return kExitOk;
        }

        throw std::invalid_argument("unknown command: " + cfg.command);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitVerifyFailed;
    }
}

/// Parses argv with CLI11 and runs the command.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"gtdnoise: coloured collapse-noise toolkit"};
    app.set_version_flag("--version", std::string(GTDNOISE_VERSION));
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--params", cfg.params_file, "GtdParams JSON file")->check(CLI::ExistingFile);
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--sig-figs", cfg.sig_figs, "significant figures (0 = full precision)")->check(CLI::Range(0, 17));
    app.add_option("--tol-wick", cfg.tol.wick, "Wick oracle tolerance");
    app.add_option("--tol-hasvac", cfg.tol.hasvac, "vacuum residual tolerance");
    app.add_option("--tol-bateman", cfg.tol.bateman, "Bateman spectrum tolerance");
    app.add_option("--tol-dephasing", cfg.tol.dephasing, "dephasing quadrature tolerance");
    app.add_option("--tol-cp", cfg.tol.cp, "Choi eigenvalue tolerance");

    auto* tables = app.add_subcommand("tables", "reproduce a numeric table");
    tables->add_option("which", cfg.target, "suppression | populated | thresholds")
        ->required()
        ->check(CLI::IsMember({"suppression", "populated", "thresholds"}));

    auto* verify = app.add_subcommand("verify", "run oracle verification suites");
    verify->add_option("suite", cfg.target, "wick | hasvac | bateman | dephasing | cp | all")
        ->required()
        ->check(CLI::IsMember({"wick", "hasvac", "bateman", "dephasing", "cp", "all"}));

    auto* dephase = app.add_subcommand("dephase", "dephasing kernel D(T) on a grid");
    dephase->add_option("--T-grid", cfg.T_grid, "a,b,c or lo:hi:n");
    dephase->add_option("--AJ", cfg.AJ, "line amplitude A_J");
    dephase->add_option("--omega0", cfg.omega0, "line half-frequency omega0");
    dephase->add_option("--gamma", cfg.gamma, "Lorentzian width");
    dephase->add_option("--mc-samples", cfg.mc_samples, "Monte-Carlo realizations per T (0 = none)");

    auto* scan = app.add_subcommand("scan", "observable versus one parameter");
    scan->add_option("--param", cfg.scan_param, "omega_S | omega0 | gamma | C_match | m | T | AJ")
        ->check(CLI::IsMember(scan_parameters()));
    scan->add_option("--range", cfg.scan_range, "lo:hi:n or a,b,c")->required();
    scan->add_option("--observable", cfg.observable, "suppression | lambda_natural | S0 | threshold_N | t1_exponent")
        ->check(CLI::IsMember(scan_observables()));
    scan->add_flag("--log", cfg.log_grid, "geometric spacing for lo:hi:n");

    auto* spectrum = app.add_subcommand("spectrum", "dump a SpectrumModel");
    cfg.target = "wightman";
    spectrum->add_option("--model", cfg.target, "wightman | symmetrized | fermion | boson")
        ->check(CLI::IsMember({"wightman", "symmetrized", "fermion", "boson"}));
    spectrum->add_option("--n-b", cfg.n_b, "b occupation (fermion model)");
    spectrum->add_option("--n-d", cfg.n_d, "d occupation (fermion model)");
    spectrum->add_option("--n-B", cfg.n_B, "boson occupation (boson model)");
    spectrum->add_option("--broaden", cfg.broaden, "replace lines by Lorentzians of this width");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    return run(cfg, out, err);
}

} // namespace gtd::app
