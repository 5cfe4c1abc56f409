// test_dynamics.cpp — Spatial kernels, Lindblad generators, Choi matrices and
// the homogeneous-kernel obstruction.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gtdnoise/dynamics.hpp"

using namespace gtd;
using namespace gtd::dynamics;

namespace {
Matrix sigma_z() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

Matrix sigma_minus() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index d) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = cplx(n(rng), n(rng));
    return m;
}

Matrix random_density(std::mt19937_64& rng, Eigen::Index d) {
    const Matrix g = random_matrix(rng, d);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace();
}

GtdParams natural() { return GtdParams::natural_defaults(); }
} // namespace

TEST(SpatialKernel, GaussianSymmetricAndPsd) {
    const auto k = SpatialKernel::gaussian(0.7);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<Point> pts;
    for (int i = 0; i < 12; ++i) pts.emplace_back(n(rng), n(rng), n(rng));
    const Eigen::MatrixXd g = k.gram(pts);
    EXPECT_LT((g - g.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_GT(min_eigenvalue(g), -1e-12);
    EXPECT_DOUBLE_EQ(k.sample(Point(0, 0, 0), Point(0, 0, 0)), 1.0);
    EXPECT_NEAR(k.sample(Point(0, 0, 0), Point(1.4, 0, 0)), std::exp(-1.0), 1e-15);
    EXPECT_THROW(SpatialKernel::gaussian(0.0), std::invalid_argument);
}

TEST(SpatialKernel, ConstantAndTable) {
    EXPECT_DOUBLE_EQ(SpatialKernel::constant(0.3).sample(Point(0, 0, 0), Point(5, 5, 5)), 0.3);
    const auto t = SpatialKernel::user_table({{2.0, 0.0}, {0.0, 1.0}, {1.0, 0.5}});
    EXPECT_DOUBLE_EQ(t.sample(Point(0, 0, 0), Point(0.5, 0, 0)), 0.75);
    EXPECT_DOUBLE_EQ(t.sample(Point(0, 0, 0), Point(1.5, 0, 0)), 0.25);
    EXPECT_DOUBLE_EQ(t.sample(Point(0, 0, 0), Point(9, 0, 0)), 0.0);
    EXPECT_THROW(SpatialKernel::user_table({}), std::invalid_argument);
    EXPECT_THROW(SpatialKernel::user_table({{-1.0, 1.0}}), std::invalid_argument);
    EXPECT_THROW(SpatialKernel::constant(-1.0), std::invalid_argument);
}

TEST(Vectorization, ColumnStackingPin) {
    std::mt19937_64 rng(2);
    const Matrix A = random_matrix(rng, 3), B = random_matrix(rng, 3), X = random_matrix(rng, 3);
    EXPECT_LT((dynamics::detail::sandwich(A, B) * vec(X) - vec(A * X * B.adjoint())).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((dynamics::detail::left(A) * vec(X) - vec(A * X)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((dynamics::detail::right(A) * vec(X) - vec(X * A)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(unvec(vec(X), 3), X);
    EXPECT_EQ(vec(X)(1), X(1, 0));
}

TEST(Rates, LorentzianProfile) {
    const auto p = natural();
    EXPECT_NEAR(rate_gamma(p, -2.0), 2.0 * 0.25 / 1.0, 1e-15);
    EXPECT_NEAR(rate_gamma(p, 0.0), 2.0 * 0.25 / 5.0, 1e-15);
    EXPECT_GT(rate_gamma(p, -2.0), rate_gamma(p, 2.0));
}

TEST(Lindblad, DistantSitesDecouple) {
    // two sites 40 r_C apart: the off-diagonal kernel weight is e^{-400}
    const auto k = SpatialKernel::gaussian(1.0);
    EXPECT_LT(k.sample(Point(0, 0, 0), Point(40, 0, 0)), 1e-10);
    const auto p = natural();
    const Matrix Z = sigma_z();
    const Matrix I2 = Matrix::Identity(2, 2);
    const Matrix Z1 = Eigen::kroneckerProduct(Z, I2).eval(), Z2 = Eigen::kroneckerProduct(I2, Z).eval();
    const Matrix both = lindblad_generator({{Z1, 0.0, Point(0, 0, 0)}, {Z2, 0.0, Point(40, 0, 0)}}, k, p);
    const Matrix sep = lindblad_generator({{Z1, 0.0, Point(0, 0, 0)}}, k, p) +
                       lindblad_generator({{Z2, 0.0, Point(40, 0, 0)}}, k, p);
    EXPECT_LT((both - sep).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Lindblad, PropagatePreservesTraceAndDephases) {
    const auto p = natural();
    const Matrix gen = lindblad_generator({{sigma_z(), 0.0, Point::Zero()}}, SpatialKernel::constant(), p);
    Matrix rho = Matrix::Constant(2, 2, 0.5);
    const Matrix out = propagate(gen, rho, 1.5);
    EXPECT_NEAR(std::abs(out.trace() - 1.0), 0.0, 1e-12);
    const double rate = rate_gamma(p, 0.0);
    // L[rho]_01 = rate (Z rho Z - rho)_01 = -2 rate rho_01
    EXPECT_NEAR(out(0, 1).real(), 0.5 * std::exp(-2.0 * rate * 1.5), 1e-12);
    EXPECT_NEAR(out(0, 0).real(), 0.5, 1e-12);
    EXPECT_THROW(propagate(gen, Matrix::Identity(2, 2), 1.0), std::invalid_argument);
    EXPECT_THROW(propagate(gen, rho, -1.0), std::invalid_argument);
}

TEST(Lindblad, AmplitudeDamping) {
    const auto p = natural();
    const Matrix gen = lindblad_generator({{sigma_minus(), -2.0, Point::Zero()}}, SpatialKernel::constant(), p);
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1.0; // excited
    const double g = rate_gamma(p, -2.0);
    const Matrix out = propagate(gen, rho, 0.7);
    EXPECT_NEAR(out(0, 0).real(), std::exp(-g * 0.7), 1e-12);
}

TEST(Choi, Identity) {
    const auto id = ChannelMap::identity(2);
    EXPECT_LT(id.trace_residual(), 1e-15);
    const auto v = cp_check(id);
    EXPECT_TRUE(v.completely_positive);
    EXPECT_NEAR(v.min_eigenvalue, 0.0, 1e-14);
    // the Choi matrix of the identity is |Omega><Omega| with trace d
    EXPECT_NEAR(id.choi().trace().real(), 2.0, 1e-15);
    EXPECT_NEAR(id.choi()(0, 3).real(), 1.0, 1e-15);
}

TEST(Choi, RandomLindbladMapsAreCp) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    const auto p = natural();
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index d = 2 + trial % 2;
        Matrix H = random_matrix(rng, d);
        H = 0.5 * (H + H.adjoint()).eval();
        std::vector<JumpOperator> ops;
        for (int j = 0; j < 3; ++j) ops.push_back({random_matrix(rng, d), -2.0 + (j % 2), Point(u(rng), 0, 0)});
        LindbladOptions opt;
        opt.hamiltonian = H;
        const auto ch = choi_of(lindblad_generator(ops, SpatialKernel::gaussian(1.0), p, opt), u(rng));
        const auto v = cp_check(ch);
        EXPECT_TRUE(v.completely_positive) << v.min_eigenvalue;
        EXPECT_LT(v.trace_preservation_residual, 1e-10);
        const Matrix rho = random_density(rng, d);
        EXPECT_NO_THROW(require_density(ch.apply(rho), 1e-9));
    }
}

TEST(Choi, NegativeControlFails) {
    LindbladOptions opt;
    opt.dissipator_sign = -1.0;
    const auto ch = choi_of(lindblad_generator({{sigma_z(), 0.0, Point::Zero()}}, SpatialKernel::constant(), natural(), opt), 1.0);
    const auto v = cp_check(ch);
    EXPECT_FALSE(v.completely_positive);
    EXPECT_LT(v.min_eigenvalue, -0.1);
    EXPECT_LT(v.trace_preservation_residual, 1e-12); // still trace preserving
}

TEST(Choi, GaussianChannelSweep) {
    for (double D : {0.0, 0.1, 1.0, 30.0}) {
        const auto ch = gaussian_dephasing_channel(1.0, -1.0, D);
        const auto v = cp_check(ch);
        EXPECT_TRUE(v.completely_positive);
        EXPECT_LT(v.trace_preservation_residual, 1e-15);
        Matrix rho = Matrix::Constant(2, 2, 0.5);
        EXPECT_NEAR(ch.apply(rho)(0, 1).real(), 0.5 * std::exp(-2.0 * D), 1e-15);
    }
    EXPECT_THROW(gaussian_dephasing_channel(1, 0, -1), std::invalid_argument);
}

TEST(Lindblad, RejectsNonPsdKernelAndBadInput) {
    // a table kernel whose Gram matrix on two points is [[1,2],[2,1]]
    const auto bad = SpatialKernel::user_table({{0.0, 1.0}, {1.0, 2.0}});
    const std::vector<JumpOperator> ops{{sigma_z(), 0.0, Point(0, 0, 0)}, {sigma_z(), 0.0, Point(1, 0, 0)}};
    EXPECT_THROW(lindblad_generator(ops, bad, natural()), std::invalid_argument);
    EXPECT_THROW(lindblad_generator({}, SpatialKernel::constant(), natural()), std::invalid_argument);
    EXPECT_THROW(lindblad_generator({{Matrix::Identity(3, 3), 0.0, Point::Zero()}, {sigma_z(), 0.0, Point::Zero()}},
                                    SpatialKernel::constant(), natural()),
                 std::invalid_argument);
    EXPECT_THROW(ChannelMap::from_superoperator(Matrix::Identity(3, 3)), std::invalid_argument);
}

TEST(Obstruction, HomogeneousKernelCannotDistinguish) {
    MassDistribution a, b;
    for (int i = 0; i < 6; ++i) a.points.emplace_back(i, 0, 0);
    b.points = a.points;
    a.masses = {1, 1, 1, 0, 0, 0};
    b.masses = {0, 0, 0, 1, 1, 1};
    EXPECT_NEAR(homogeneous_obstruction_check(a, b, SpatialKernel::constant(2.0)), 0.0, 1e-14);
    EXPECT_GT(homogeneous_obstruction_check(a, b, SpatialKernel::gaussian(0.5)), 1.0);
    // one-particle value 2 m^2 (1 - e^{-Delta^2 / 4 r_C^2})
    MassDistribution c{{Point(0, 0, 0), Point(1, 0, 0)}, {1, 0}}, e{{Point(0, 0, 0), Point(1, 0, 0)}, {0, 1}};
    EXPECT_NEAR(homogeneous_obstruction_check(c, e, SpatialKernel::gaussian(1.0)), 2.0 * (1.0 - std::exp(-0.25)), 1e-15);
    b.masses.back() = 2.0;
    EXPECT_THROW(homogeneous_obstruction_check(a, b, SpatialKernel::constant()), std::invalid_argument);
    b.masses.back() = 1.0;
    b.points.back() = Point(9, 9, 9);
    EXPECT_THROW(homogeneous_obstruction_check(a, b, SpatialKernel::constant()), std::invalid_argument);
}

TEST(Json, ChannelSerialization) {
    const auto j = to_json(gaussian_dephasing_channel(1, 0, 0.5));
    EXPECT_EQ(j.at("dimension").get<int>(), 2);
    EXPECT_EQ(j.at("superoperator").size(), 4u);
}
