// dephasing.hpp — Dephasing kernel D(T) for a single-line bath: closed forms,
// short-time series, coherence factors and a seeded Monte-Carlo ensemble of
// Gaussian noise realizations.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gtd::dephasing {

using cplx = std::complex<double>;

/// D(T) = A_J (1 - cos 2 omega0 T) / (2 omega0^2) for the unbroadened line.
inline double d_exact(double A_J, double omega0, double T) {
    if (T < 0) throw std::invalid_argument("d_exact: T must be >= 0");
    if (!(omega0 > 0)) throw std::invalid_argument("d_exact: omega0 must be > 0");
    // 1 - cos x = 2 sin^2(x/2) avoids cancellation at small T
    const double s = std::sin(omega0 * T);
    return A_J * s * s / (omega0 * omega0);
}

namespace detail {
// T^2 * sum_{k>=2} (-zT)^{k-2} / k!  ==  (zT - 1 + e^{-zT}) / z^2
inline cplx broadened_series(cplx z, double T) {
    const cplx x = -z * T;
    cplx term = 0.5, sum = 0.5;
    for (int k = 3; k < 60; ++k) {
        term *= x / static_cast<double>(k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum * T * T;
}
} // namespace detail

/// D(T) = 2 A_J Re[(Tz - 1 + e^{-zT}) / z^2], z = gamma - i Omega, for the
/// Lorentzian-broadened kernel A_J e^{-gamma|tau|} cos(Omega tau).
inline double d_broadened(double A_J, double Omega, double gamma, double T) {
    if (T < 0) throw std::invalid_argument("d_broadened: T must be >= 0");
    if (gamma < 0) throw std::invalid_argument("d_broadened: gamma must be >= 0");
    if (T == 0) return 0.0;
    if (gamma == 0 && Omega == 0) return A_J * T * T;
    if (gamma == 0) return d_exact(A_J, std::abs(Omega) / 2.0, T);
    const cplx z(gamma, -Omega);
    const double zT = std::abs(z) * T;
    // the closed form subtracts nearly equal terms below |z|T ~ 1
    if (zT < 0.5) return 2.0 * A_J * detail::broadened_series(z, T).real();
    const cplx val = (z * T - 1.0 + std::exp(-z * T)) / (z * z);
    return 2.0 * A_J * val.real();
}

/// A_J T^2 - A_J gamma T^3 / 3 + A_J (gamma^2 - Omega^2) T^4 / 12.
inline double short_time_expansion(double A_J, double Omega, double gamma, double T) {
    if (T < 0) throw std::invalid_argument("short_time_expansion: T must be >= 0");
    const double T2 = T * T;
    return A_J * T2 - A_J * gamma / 3.0 * T2 * T + A_J * (gamma * gamma - Omega * Omega) / 12.0 * T2 * T2;
}

/// |rho_ab(T) / rho_ab(0)| = exp(-(a-b)^2 D(T) / (2 hbar^2)) with Omega = 2 omega0.
/// Exact only for pure-dephasing couplings; the caller is responsible for that.
inline double coherence_ratio(double a_minus_b, double A_J, double omega0, double gamma, double T, double hbar = 1.0) {
    const double D = gamma == 0 ? d_exact(A_J, omega0, T) : d_broadened(A_J, 2.0 * omega0, gamma, T);
    return std::exp(-a_minus_b * a_minus_b * D / (2.0 * hbar * hbar));
}

/// Quasi-static coefficient (a-b)^2 A_J / (2 hbar^2), in 1/s^2.
inline double gamma_qs(double a_minus_b, double A_J, double hbar = 1.0) {
    return a_minus_b * a_minus_b * A_J / (2.0 * hbar * hbar);
}

/// Markovian rate reproducing the quasi-static exponent at T_ref.
inline double lambda_eff(double gamma_qs_val, double T_ref) {
    if (!(T_ref > 0)) throw std::invalid_argument("lambda_eff: T_ref must be > 0");
    return gamma_qs_val * T_ref;
}

/// |\int_0^T e^{-2 i omega0 t} dt|^2 = sin^2(omega0 T) / omega0^2.
inline double route_b_exponent(double omega0, double T) {
    if (T < 0) throw std::invalid_argument("route_b_exponent: T must be >= 0");
    if (!(omega0 > 0)) throw std::invalid_argument("route_b_exponent: omega0 must be > 0");
    const double s = std::sin(omega0 * T);
    return s * s / (omega0 * omega0);
}

// --- Monte Carlo ---------------------------------------------------------------

/// SplitMix64 finalizer; derives independent stream seeds from (seed, index).
inline std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// xi(t) = sqrt(A_J) (alpha cos 2 omega0 t + beta sin 2 omega0 t). With alpha,
/// beta independent standard normals this is an exact stationary Gaussian
/// process with covariance A_J cos(2 omega0 (t - s)).
struct NoiseRealization {
    double A_J{};
    double omega0{};
    double alpha{};
    double beta{};

    double operator()(double t) const {
        const double x = 2.0 * omega0 * t;
        return std::sqrt(A_J) * (alpha * std::cos(x) + beta * std::sin(x));
    }

    /// \int_0^T xi(t) dt.
    double integral(double T) const {
        const double x = 2.0 * omega0 * T;
        return std::sqrt(A_J) * (alpha * std::sin(x) + beta * (1.0 - std::cos(x))) / (2.0 * omega0);
    }
};

template <class Rng>
NoiseRealization draw_noise(double A_J, double omega0, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    NoiseRealization r{A_J, omega0, 0.0, 0.0};
    r.alpha = normal(rng);
    r.beta = normal(rng);
    return r;
}

inline NoiseRealization sample_noise(double A_J, double omega0, std::uint64_t seed) {
    if (A_J < 0) throw std::invalid_argument("sample_noise: A_J must be >= 0");
    if (!(omega0 > 0)) throw std::invalid_argument("sample_noise: omega0 must be > 0");
    std::mt19937_64 rng(splitmix64(seed, 0));
    return draw_noise(A_J, omega0, rng);
}

struct McEstimate {
    double mean{};
    double stderr_{}; // standard error of the mean
    std::size_t samples{};
    std::uint64_t seed{};
};

inline constexpr std::size_t kMcChunks = 64;

/// Mean of f(xi) over n_samples noise realizations. Realizations are split into
/// a fixed number of chunks, each with its own seeded stream, and reduced in
/// chunk order, so the result does not depend on the thread count.
template <class F>
McEstimate mc_mean(double A_J, double omega0, std::size_t n_samples, std::uint64_t seed, F&& f, unsigned threads = 0) {
    if (n_samples < 2) throw std::invalid_argument("mc_mean: need at least 2 samples");
    if (!(omega0 > 0) || A_J < 0) throw std::invalid_argument("mc_mean: invalid noise parameters");

    struct Partial { double s{}, s2{}; };
    std::vector<Partial> parts(kMcChunks);
    auto run_chunk = [&](std::size_t c) {
        const std::size_t begin = n_samples * c / kMcChunks, end = n_samples * (c + 1) / kMcChunks;
        std::mt19937_64 rng(splitmix64(seed, c + 1));
        Partial p;
        for (std::size_t i = begin; i < end; ++i) {
            const double v = f(draw_noise(A_J, omega0, rng));
            p.s += v;
            p.s2 += v * v;
        }
        parts[c] = p;
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, kMcChunks);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back([&] { for (std::size_t c; (c = next++) < kMcChunks;) run_chunk(c); });
    for (std::size_t c; (c = next++) < kMcChunks;) run_chunk(c);
    for (auto& th : pool) th.join();

    Partial total;
    for (const auto& p : parts) {
        total.s += p.s;
        total.s2 += p.s2;
    }
    const double n = static_cast<double>(n_samples);
    McEstimate e;
    e.mean = total.s / n;
    const double var = std::max(0.0, (total.s2 - n * e.mean * e.mean) / (n - 1.0));
    e.stderr_ = std::sqrt(var / n);
    e.samples = n_samples;
    e.seed = seed;
    return e;
}

/// Kraus-average estimate of |E[exp(-i (a-b) \int_0^T xi / hbar)]|; the
/// imaginary part vanishes by symmetry, so the estimator is E[cos(phase)].
inline McEstimate mc_coherence(double a_minus_b, double A_J, double omega0, double T, std::size_t n_samples,
                               std::uint64_t seed, double hbar = 1.0, unsigned threads = 0) {
    if (T < 0) throw std::invalid_argument("mc_coherence: T must be >= 0");
    return mc_mean(A_J, omega0, n_samples, seed,
                   [&](const NoiseRealization& xi) { return std::cos(a_minus_b * xi.integral(T) / hbar); }, threads);
}

/// Monte-Carlo estimate of D(T) = E[(\int_0^T xi)^2] for the unbroadened line.
inline McEstimate mc_kernel(double A_J, double omega0, double T, std::size_t n_samples, std::uint64_t seed,
                            unsigned threads = 0) {
    if (T < 0) throw std::invalid_argument("mc_kernel: T must be >= 0");
    return mc_mean(A_J, omega0, n_samples, seed,
                   [&](const NoiseRealization& xi) { const double I = xi.integral(T); return I * I; }, threads);
}

// --- Curves ------------------------------------------------------------------

enum class Regime { quasi_static, oscillatory, markovian };

inline const char* to_string(Regime r) {
    switch (r) {
    case Regime::quasi_static: return "quasi_static";
    case Regime::oscillatory: return "oscillatory";
    case Regime::markovian: return "markovian";
    }
    return "?";
}

/// quasi_static below both 1/Omega and 1/gamma, markovian once gamma T > 1,
/// oscillatory in between.
inline Regime classify(double T, double Omega, double gamma) {
    const double t_osc = Omega > 0 ? 1.0 / Omega : INFINITY;
    const double t_corr = gamma > 0 ? 1.0 / gamma : INFINITY;
    if (T < std::min(t_osc, t_corr)) return Regime::quasi_static;
    if (T > t_corr) return Regime::markovian;
    return Regime::oscillatory;
}

struct DephasingSample {
    double T{};
    double D{};
    Regime regime{};
};

struct DephasingCurve {
    std::vector<DephasingSample> samples;

    static DephasingCurve evaluate(double A_J, double Omega, double gamma, const std::vector<double>& T_grid) {
        if (T_grid.empty()) throw std::invalid_argument("DephasingCurve: empty T grid");
        DephasingCurve c;
        for (double T : T_grid) c.samples.push_back({T, d_broadened(A_J, Omega, gamma, T), classify(T, Omega, gamma)});
        return c;
    }

    std::string to_csv() const {
        std::ostringstream os;
        os.precision(17);
        os << "T,D,regime\n";
        for (const auto& s : samples) os << s.T << ',' << s.D << ',' << to_string(s.regime) << '\n';
        return os.str();
    }
};

} // namespace gtd::dephasing
