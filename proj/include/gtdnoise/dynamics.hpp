// dynamics.hpp — Secular Lindblad generators with a spatial (Kossakowski)
// kernel, propagation, Choi matrices and positivity verdicts for small systems.
//
// Vectorization is column-stacking throughout: vec(A X B) = (B^T (x) A) vec(X).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>
#include <json.hpp>

#include "gtdnoise/params.hpp"

namespace gtd::dynamics {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Point = Eigen::Vector3d;

inline constexpr double kPsdTolerance = -1e-10;

// --- Spatial kernel -----------------------------------------------------------

/// Theta(x, y). Gaussian: exp(-|x-y|^2 / (4 r_C^2)), the overlap of two
/// normalized Gaussian smearing profiles of width r_C. Constant: a fixed value
/// everywhere. User table: isotropic (r, Theta) pairs, linearly interpolated and
/// held at the last value beyond the table.
class SpatialKernel {
public:
    enum class Kind { gaussian, constant, user_table };

    static SpatialKernel gaussian(double r_C) {
        if (!(r_C > 0)) throw std::invalid_argument("SpatialKernel: r_C must be > 0");
        SpatialKernel k;
        k.kind_ = Kind::gaussian;
        k.r_C_ = r_C;
        return k;
    }

    static SpatialKernel constant(double value = 1.0) {
        if (!(value >= 0)) throw std::invalid_argument("SpatialKernel: constant value must be >= 0");
        SpatialKernel k;
        k.kind_ = Kind::constant;
        k.value_ = value;
        return k;
    }

    static SpatialKernel user_table(std::vector<std::pair<double, double>> table) {
        if (table.empty()) throw std::invalid_argument("SpatialKernel: empty table");
        std::sort(table.begin(), table.end());
        if (table.front().first < 0) throw std::invalid_argument("SpatialKernel: table distances must be >= 0");
        SpatialKernel k;
        k.kind_ = Kind::user_table;
        k.table_ = std::move(table);
        return k;
    }

    Kind kind() const { return kind_; }
    double r_C() const { return r_C_; }

    double sample(const Point& x, const Point& y) const {
        const double r = (x - y).norm();
        switch (kind_) {
        case Kind::gaussian: return std::exp(-r * r / (4.0 * r_C_ * r_C_));
        case Kind::constant: return value_;
        case Kind::user_table: {
            if (r <= table_.front().first) return table_.front().second;
            if (r >= table_.back().first) return table_.back().second;
            auto hi = std::lower_bound(table_.begin(), table_.end(), r,
                                       [](const auto& e, double v) { return e.first < v; });
            auto lo = std::prev(hi);
            const double t = (r - lo->first) / (hi->first - lo->first);
            return lo->second + t * (hi->second - lo->second);
        }
        }
        return 0.0;
    }

    Eigen::MatrixXd gram(const std::vector<Point>& pts) const {
        const auto n = static_cast<Eigen::Index>(pts.size());
        Eigen::MatrixXd g(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) g(i, j) = sample(pts[i], pts[j]);
        return g;
    }

private:
    Kind kind_{Kind::constant};
    double r_C_{1.0};
    double value_{1.0};
    std::vector<std::pair<double, double>> table_;
};

inline double min_eigenvalue(const Eigen::MatrixXd& sym) {
    if (sym.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline double min_eigenvalue(const Matrix& herm) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// --- Generator --------------------------------------------------------------

/// One jump operator M(omega_S) attached to a site.
struct JumpOperator {
    Matrix M;
    double omega_S{};
    Point site{Point::Zero()};
};

/// g^2 / hbar^2 * 2 A_J gamma / ((omega_S + 2 omega0)^2 + gamma^2).
inline double rate_gamma(const GtdParams& p, double omega_S) {
    const double d = omega_S + 2.0 * p.omega0();
    const double g = p.gamma_width();
    return p.g_int() * p.g_int() / (p.hbar() * p.hbar()) * 2.0 * amplitude_AJ(p) * g / (d * d + g * g);
}

struct LindbladOptions {
    std::optional<Matrix> hamiltonian{};  // system Hamiltonian H_S; Lamb shift is not included
    double dissipator_sign{1.0};         // -1 builds the (non-CP) negative control
    double grouping_tolerance{1e-9};     // Bohr frequencies within tol * omega0 share a block
};

namespace detail {
inline Matrix kron(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

/// Superoperator of X -> A X B^dag.
inline Matrix sandwich(const Matrix& A, const Matrix& B) { return kron(B.conjugate(), A); }
inline Matrix left(const Matrix& K) { return kron(Matrix::Identity(K.rows(), K.cols()), K); }
inline Matrix right(const Matrix& K) { return kron(K.transpose(), Matrix::Identity(K.rows(), K.cols())); }
} // namespace detail

/// Secular GKLS generator
///   L rho = -i/hbar [H_S, rho]
///         + sum_w Gamma(w) sum_ij Theta(x_i, x_j) [M_i rho M_j^dag - {M_j^dag M_i, rho}/2],
/// with one block per (grouped) Bohr frequency. Throws if a block's kernel
/// Gram matrix is not PSD.
inline Matrix lindblad_generator(const std::vector<JumpOperator>& ops, const SpatialKernel& kernel, const GtdParams& p,
                                 const LindbladOptions& opt = {}) {
    if (ops.empty() && !opt.hamiltonian) throw std::invalid_argument("lindblad_generator: no operators");
    const Eigen::Index d = ops.empty() ? opt.hamiltonian->rows() : ops.front().M.rows();
    for (const auto& op : ops)
        if (op.M.rows() != d || op.M.cols() != d) throw std::invalid_argument("lindblad_generator: jump operator dimension mismatch");

    Matrix L = Matrix::Zero(d * d, d * d);
    if (opt.hamiltonian) {
        const Matrix& H = *opt.hamiltonian;
        if (H.rows() != d || H.cols() != d) throw std::invalid_argument("lindblad_generator: Hamiltonian dimension mismatch");
        L += cplx(0.0, -1.0 / p.hbar()) * (detail::left(H) - detail::right(H));
    }

    // group Bohr frequencies
    const double tol = opt.grouping_tolerance * p.omega0();
    std::vector<std::vector<std::size_t>> groups;
    std::vector<double> centers;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        bool placed = false;
        for (std::size_t g = 0; g < groups.size() && !placed; ++g)
            if (std::abs(ops[i].omega_S - centers[g]) <= tol) {
                groups[g].push_back(i);
                placed = true;
            }
        if (!placed) {
            groups.push_back({i});
            centers.push_back(ops[i].omega_S);
        }
    }

    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& idx = groups[g];
        std::vector<Point> sites;
        for (auto i : idx) sites.push_back(ops[i].site);
        const Eigen::MatrixXd theta = kernel.gram(sites);
        const double lmin = min_eigenvalue(theta);
        if (lmin < kPsdTolerance)
            throw std::invalid_argument("lindblad_generator: kernel Gram matrix not PSD (min eigenvalue " +
                                        std::to_string(lmin) + ")");
        const double rate = rate_gamma(p, centers[g]);
        if (rate < 0) throw std::logic_error("lindblad_generator: negative rate");
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < idx.size(); ++b) {
                const double w = opt.dissipator_sign * rate * theta(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                if (w == 0.0) continue;
                const Matrix& Mi = ops[idx[a]].M;
                const Matrix& Mj = ops[idx[b]].M;
                const Matrix K = Mj.adjoint() * Mi;
                L += w * (detail::sandwich(Mi, Mj) - 0.5 * (detail::left(K) + detail::right(K)));
            }
    }
    return L;
}

inline Vector vec(const Matrix& X) { return Eigen::Map<const Vector>(X.data(), X.size()); }

inline Matrix unvec(const Vector& v, Eigen::Index d) { return Eigen::Map<const Matrix>(v.data(), d, d); }

inline void require_density(const Matrix& rho, double tol = 1e-9) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
    if (std::abs(rho.trace() - cplx(1.0)) > tol) throw std::invalid_argument("density matrix trace must be 1");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) throw std::invalid_argument("density matrix must be Hermitian");
    if (min_eigenvalue(Matrix(0.5 * (rho + rho.adjoint()))) < -tol) throw std::invalid_argument("density matrix must be PSD");
}

/// rho(t) = unvec(exp(L t) vec rho0), re-Hermitized. The trace is not
/// renormalized: trace preservation is a property to be checked, not imposed.
inline Matrix propagate(const Matrix& gen, const Matrix& rho0, double t) {
    const Eigen::Index d = rho0.rows();
    if (gen.rows() != d * d || gen.cols() != d * d) throw std::invalid_argument("propagate: dimension mismatch");
    if (d > 16) throw std::invalid_argument("propagate: system dimension must be <= 16");
    if (t < 0) throw std::invalid_argument("propagate: t must be >= 0");
    require_density(rho0);
    const Matrix S = (gen * t).exp();
    const Matrix rho = unvec(S * vec(rho0), d);
    return 0.5 * (rho + rho.adjoint());
}

// --- Channels -----------------------------------------------------------------

struct CpVerdict {
    bool completely_positive{};
    double min_eigenvalue{};
    double trace_preservation_residual{};
};

/// Linear map on d x d matrices, stored as its column-stacked superoperator
/// and its Choi matrix sum_ij |i><j| (x) Phi(|i><j|) (input factor first).
class ChannelMap {
public:
    static ChannelMap from_superoperator(Matrix S) {
        const auto d2 = S.rows();
        const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(d2))));
        if (S.cols() != d2 || d * d != d2) throw std::invalid_argument("ChannelMap: superoperator must be d^2 x d^2");
        ChannelMap ch;
        ch.d_ = d;
        ch.choi_ = Matrix::Zero(d2, d2);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) {
                const Matrix out = unvec(S.col(i + j * d), d);
                ch.choi_.block(i * d, j * d, d, d) = out;
            }
        ch.super_ = std::move(S);
        return ch;
    }

    static ChannelMap identity(Eigen::Index d) { return from_superoperator(Matrix::Identity(d * d, d * d)); }

    Eigen::Index dim() const { return d_; }
    const Matrix& superoperator() const { return super_; }
    const Matrix& choi() const { return choi_; }

    Matrix apply(const Matrix& rho) const {
        if (rho.rows() != d_ || rho.cols() != d_) throw std::invalid_argument("ChannelMap: dimension mismatch");
        return unvec(super_ * vec(rho), d_);
    }

    /// max |Tr_out(Choi) - I|.
    double trace_residual() const {
        Matrix pt = Matrix::Zero(d_, d_);
        for (Eigen::Index i = 0; i < d_; ++i)
            for (Eigen::Index j = 0; j < d_; ++j) pt(i, j) = choi_.block(i * d_, j * d_, d_, d_).trace();
        return (pt - Matrix::Identity(d_, d_)).cwiseAbs().maxCoeff();
    }

private:
    Eigen::Index d_{};
    Matrix super_;
    Matrix choi_;
};

inline ChannelMap choi_of(const Matrix& gen, double t) {
    if (t < 0) throw std::invalid_argument("choi_of: t must be >= 0");
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(gen.rows()))));
    if (d > 8) throw std::invalid_argument("choi_of: system dimension must be <= 8");
    return ChannelMap::from_superoperator((gen * t).exp());
}

inline CpVerdict cp_check(const ChannelMap& ch, double tol = kPsdTolerance) {
    const Matrix h = 0.5 * (ch.choi() + ch.choi().adjoint());
    CpVerdict v;
    v.min_eigenvalue = min_eigenvalue(h);
    v.completely_positive = v.min_eigenvalue >= tol;
    v.trace_preservation_residual = ch.trace_residual();
    return v;
}

/// Qubit map keeping populations and multiplying coherences by
/// exp(-(a-b)^2 D_T / (2 hbar^2)).
inline ChannelMap gaussian_dephasing_channel(double a, double b, double D_T, double hbar = 1.0) {
    if (D_T < 0) throw std::invalid_argument("gaussian_dephasing_channel: D_T must be >= 0");
    const double f = std::exp(-(a - b) * (a - b) * D_T / (2.0 * hbar * hbar));
    Matrix S = Matrix::Identity(4, 4);
    S(1, 1) = f; // rho_10
    S(2, 2) = f; // rho_01
    return ChannelMap::from_superoperator(std::move(S));
}

// --- Homogeneous-bath obstruction ------------------------------------------

/// Point masses on a set of grid points.
struct MassDistribution {
    std::vector<Point> points;
    std::vector<double> masses;

    double total() const {
        double m = 0.0;
        for (double x : masses) m += x;
        return m;
    }
};

/// Discretized decoherence functional sum_ij (mu_a - mu_b)_i Theta(x_i, x_j) (mu_a - mu_b)_j
/// for two branches on the same grid with equal total mass.
inline double homogeneous_obstruction_check(const MassDistribution& a, const MassDistribution& b,
                                            const SpatialKernel& kernel) {
    if (a.points.size() != a.masses.size() || b.points.size() != b.masses.size())
        throw std::invalid_argument("obstruction check: one mass per grid point required");
    if (a.points.size() != b.points.size()) throw std::invalid_argument("obstruction check: grid mismatch");
    for (std::size_t i = 0; i < a.points.size(); ++i)
        if ((a.points[i] - b.points[i]).norm() > 0) throw std::invalid_argument("obstruction check: grid mismatch");
    const double ma = a.total(), mb = b.total();
    if (std::abs(ma - mb) > 1e-12 * std::max(std::abs(ma), std::abs(mb)))
        throw std::invalid_argument("obstruction check: branches must carry equal total mass");

    const std::size_t n = a.points.size();
    Eigen::VectorXd dmu(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) dmu(static_cast<Eigen::Index>(i)) = a.masses[i] - b.masses[i];
    return dmu.dot(kernel.gram(a.points) * dmu);
}

// --- JSON -------------------------------------------------------------------

inline nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
    }
    return rows;
}

inline nlohmann::json to_json(const ChannelMap& ch) {
    const auto v = cp_check(ch);
    return {{"dimension", ch.dim()},
            {"superoperator", matrix_to_json(ch.superoperator())},
            {"choi", matrix_to_json(ch.choi())},
            {"min_choi_eigenvalue", v.min_eigenvalue},
            {"completely_positive", v.completely_positive}};
}

} // namespace gtd::dynamics
