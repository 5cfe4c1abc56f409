// spectral.hpp — Symbolic spectra of the bath current: delta lines, Lorentzian
// lines and a zero-frequency pedestal, plus occupation factors and the
// off-resonance suppression arithmetic.
//
// Fourier convention (fixed everywhere): S(w) = \int dtau e^{-i w tau} C(tau),
// so a line of weight W at centre W_c corresponds to C(tau) = W e^{+i W_c tau}.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "gtdnoise/params.hpp"

namespace gtd::spectral {

using cplx = std::complex<double>;

struct DeltaLine {
    double weight{}; // area under S(w) dw / 2pi
    double center{};
};

struct LorentzianLine {
    double area{};
    double center{};
    double width{};
};

/// Sum of delta lines, Lorentzians and a zero-frequency pedestal. Never
/// sampled on a grid: a line at 2 H0 cannot be resolved by any feasible mesh.
class SpectrumModel {
public:
    std::vector<DeltaLine> delta_lines;
    std::vector<LorentzianLine> lorentzians;
    double pedestal_weight{0.0};

    void add_line(double weight, double center) { delta_lines.push_back({weight, center}); }

    void add_lorentzian(double area, double center, double width) {
        if (!(width > 0)) throw std::invalid_argument("SpectrumModel: Lorentzian width must be > 0");
        lorentzians.push_back({area, center, width});
    }

    /// C(tau) as the inverse transform of the model.
    cplx correlator(double tau) const {
        cplx c = pedestal_weight;
        for (const auto& l : delta_lines) c += l.weight * std::polar(1.0, l.center * tau);
        for (const auto& l : lorentzians) c += l.area * std::exp(-l.width * std::abs(tau)) * std::polar(1.0, l.center * tau);
        return c;
    }

    /// C(0), which equals the total weight.
    double total_weight() const {
        double w = pedestal_weight;
        for (const auto& l : delta_lines) w += l.weight;
        for (const auto& l : lorentzians) w += l.area;
        return w;
    }

    /// Smooth part of S(w): the Lorentzians only (delta lines have no pointwise value).
    double lorentzian_density(double omega) const;

    /// Every delta line (and the pedestal) replaced by a Lorentzian of width gamma.
    SpectrumModel broadened(double gamma) const {
        SpectrumModel out;
        out.lorentzians = lorentzians;
        for (const auto& l : delta_lines) out.add_lorentzian(l.weight, l.center, gamma);
        if (pedestal_weight != 0.0) out.add_lorentzian(pedestal_weight, 0.0, gamma);
        return out;
    }
};

/// Lorentzian with unit-normalized area under dw/2pi: A 2 gamma / ((w - Wc)^2 + gamma^2).
inline double lorentzian_S(double omega, double area, double center, double gamma) {
    if (!(gamma > 0)) throw std::invalid_argument("lorentzian_S: width must be > 0");
    const double d = omega - center;
    return area * 2.0 * gamma / (d * d + gamma * gamma);
}

inline double SpectrumModel::lorentzian_density(double omega) const {
    double s = 0.0;
    for (const auto& l : lorentzians) s += lorentzian_S(omega, l.area, l.center, l.width);
    return s;
}

inline nlohmann::json to_json(const SpectrumModel& m) {
    nlohmann::json d = nlohmann::json::array(), l = nlohmann::json::array();
    for (const auto& x : m.delta_lines) d.push_back({{"weight", x.weight}, {"center", x.center}});
    for (const auto& x : m.lorentzians) l.push_back({{"area", x.area}, {"center", x.center}, {"width", x.width}});
    return {{"delta_lines", d}, {"lorentzians", l}, {"pedestal_weight", m.pedestal_weight}};
}

inline SpectrumModel spectrum_from_json(const nlohmann::json& j) {
    SpectrumModel m;
    for (const auto& x : j.at("delta_lines")) m.add_line(x.at("weight").get<double>(), x.at("center").get<double>());
    for (const auto& x : j.at("lorentzians"))
        m.add_lorentzian(x.at("area").get<double>(), x.at("center").get<double>(), x.at("width").get<double>());
    m.pedestal_weight = j.at("pedestal_weight").get<double>();
    return m;
}

// --- Vacuum line ------------------------------------------------------------

/// Wightman spectrum of the vacuum current: one line of weight A_J at -2 sigma omega0.
inline SpectrumModel wightman_line(const GtdParams& p) {
    SpectrumModel m;
    m.add_line(amplitude_AJ(p), -2.0 * p.sigma_branch() * p.omega0());
    return m;
}

/// Real (symmetrized) spectrum: A_J/2 at each of +-2 omega0.
inline SpectrumModel symmetrized_model(const GtdParams& p) {
    const double a = amplitude_AJ(p);
    SpectrumModel m;
    m.add_line(0.5 * a, 2.0 * p.omega0());
    m.add_line(0.5 * a, -2.0 * p.omega0());
    return m;
}

inline double csym(const GtdParams& p, double tau) {
    return amplitude_AJ(p) * std::cos(2.0 * p.omega0() * tau);
}

/// chi(tau) = C(tau) - C(-tau) = -2 i sigma A_J sin(2 omega0 tau).
inline cplx commutator_kernel(const GtdParams& p, double tau) {
    return cplx(0.0, -2.0 * p.sigma_branch() * amplitude_AJ(p) * std::sin(2.0 * p.omega0() * tau));
}

/// gamma^2 / ((omega_S + 2 omega0)^2 + gamma^2): Lorentzian at -2 omega0
/// evaluated at omega_S relative to its peak.
inline double offres_suppression(double omega_S, double omega0, double gamma) {
    if (!(gamma > 0)) throw std::invalid_argument("offres_suppression: gamma must be > 0");
    const double d = omega_S + 2.0 * omega0;
    return gamma * gamma / (d * d + gamma * gamma);
}

// --- Occupations ------------------------------------------------------------

/// Fermi-Dirac occupation at x = beta hbar omega.
inline double fermi_occupation(double x) {
    if (!(x > 0)) throw std::invalid_argument("fermi_occupation: beta hbar omega must be > 0");
    return 1.0 / (std::exp(x) + 1.0);
}

/// Bose-Einstein occupation at x = beta hbar omega.
inline double bose_occupation(double x) {
    if (!(x > 0)) throw std::invalid_argument("bose_occupation: beta hbar omega must be > 0");
    return 1.0 / std::expm1(x);
}

// --- Populated baths ----------------------------------------------------------

/// Forward line (1-n_b)(1-n_d) A_J at -2 sigma omega0, backward n_b n_d A_J at
/// +2 sigma omega0, pedestal [n_b(1-n_b) + n_d(1-n_d)] A_J.
inline SpectrumModel populated_fermion_model(const GtdParams& p, double n_b, double n_d) {
    if (n_b < 0.0 || n_b > 1.0 || n_d < 0.0 || n_d > 1.0)
        throw std::invalid_argument("populated_fermion_model: occupations must lie in [0,1]");
    const double a = amplitude_AJ(p);
    const double w = 2.0 * p.sigma_branch() * p.omega0();
    SpectrumModel m;
    m.add_line((1.0 - n_b) * (1.0 - n_d) * a, -w);
    m.add_line(n_b * n_d * a, w);
    m.pedestal_weight = (n_b * (1.0 - n_b) + n_d * (1.0 - n_d)) * a;
    return m;
}

/// Bosonic-surrogate bath: (n+1)^2 A_J at +2 omega0, n^2 A_J at -2 omega0,
/// pedestal 2 n (n+1) A_J. The total is (2n+1)^2 A_J.
inline SpectrumModel populated_boson_model(const GtdParams& p, double n_B) {
    if (n_B < 0.0) throw std::invalid_argument("populated_boson_model: occupation must be >= 0");
    const double a = amplitude_AJ(p);
    SpectrumModel m;
    m.add_line((n_B + 1.0) * (n_B + 1.0) * a, 2.0 * p.omega0());
    m.add_line(n_B * n_B * a, -2.0 * p.omega0());
    m.pedestal_weight = 2.0 * n_B * (n_B + 1.0) * a;
    return m;
}

/// Thermal fermionic factors at x = beta hbar omega0 (both species share n_F).
struct ThermalFermionRow {
    double beta_hbar_omega0{};
    double n_F{};
    double backward_over_forward{};
    double pedestal_over_AJ{};
};

inline ThermalFermionRow thermal_fermion_row(double x) {
    const double n = fermi_occupation(x);
    const double forward = (1.0 - n) * (1.0 - n);
    return {x, n, n * n / forward, 2.0 * n * (1.0 - n)};
}

/// Equal-time enhancement (2 n_B + 1)^2 of the bosonic surrogate.
inline double boson_enhancement(double x) {
    const double n = bose_occupation(x);
    return (2.0 * n + 1.0) * (2.0 * n + 1.0);
}

} // namespace gtd::spectral
