#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "mls/errors.hpp"
#include "mls/instances.hpp"
#include "mls/spectral.hpp"

using namespace mls;

namespace {

OperatorBundle bundle_for(std::vector<double> xs, int l, const WeightSpec& w, double x)
{
    return build_operators(MlsSystem::build(PointSet::line(xs), BasisSpec::monomial(1, l), w, x));
}

const InequalityCheck& find(const std::vector<InequalityCheck>& checks, const std::string& name)
{
    auto it = std::find_if(checks.begin(), checks.end(), [&](const auto& c) { return c.name == name; });
    EXPECT_NE(it, checks.end()) << name;
    return *it;
}

// Real parts of eig(M) in descending order, from the general solver.
std::vector<double> dense_eigs(const Matrix& M)
{
    Eigen::EigenSolver<Matrix> es(M, false);
    std::vector<double> out;
    for (auto z : es.eigenvalues()) out.push_back(z.real());
    std::sort(out.rbegin(), out.rend());
    return out;
}

} // namespace

TEST(Operators, TraceEqualsL)
{
    const OperatorBundle b = bundle_for({0, 1, 2}, 2, WeightSpec::exp(1.0), 0.3);
    EXPECT_NEAR(b.A1.trace(), 2.0, 1e-13);
    EXPECT_NEAR(eigen_structure(b).trace_a1, 2.0, 1e-13);
    // A1 = A0 E^t built directly
    EXPECT_LT((b.A1 - b.A0 * b.E.transpose()).norm(), 1e-14);
}

TEST(Operators, RequiresPositiveD)
{
    const auto sys = MlsSystem::build(PointSet::line({0, 1, 2}), BasisSpec::monomial(1, 2), WeightSpec::shepard(1.0), 1.0);
    EXPECT_THROW(build_operators(sys), PreconditionError);
}

TEST(Symmetry, Examples)
{
    const SymmetryResult sq = check_symmetry(bundle_for({0, 1, 2}, 3, WeightSpec::exp(1.0), 0.4));
    EXPECT_TRUE(sq.pass);
    EXPECT_LE(sq.a2_dinv, 1e-13);

    const SymmetryResult one = check_symmetry(bundle_for({0.5}, 1, WeightSpec::exp(1.0), 0.1));
    EXPECT_EQ(one.a1_dinv, 0.0);
    EXPECT_EQ(one.a2_dinv, 0.0);

    InstanceOptions opt;
    opt.min_m = 6;
    opt.max_m = 6;
    opt.max_l = 3;
    InstanceGenerator gen(3, opt);
    for (int n = 0; n < 20; ++n) {
        const RandomInstance in = gen.next();
        const SymmetryResult r = check_symmetry(build_operators(MlsSystem::build(in.points, in.basis, in.weight, in.x)));
        EXPECT_LE(r.a1_dinv, 1e-10);
        EXPECT_LE(r.a2_dinv, 1e-10);
    }
}

TEST(Eigen, Multiplicities)
{
    const EigenResult r52 = eigen_structure(bundle_for({0, 0.7, 1.5, 2.1, 3.0}, 2, WeightSpec::exp(0.8), 1.2));
    EXPECT_TRUE(r52.pass);
    EXPECT_EQ(r52.a1_one.count, 2);
    EXPECT_EQ(r52.a1_zero.count, 3);
    EXPECT_EQ(r52.a2_minus_one.count, 3);
    EXPECT_LE(r52.max_deviation, 1e-8);

    const EigenResult r33 = eigen_structure(bundle_for({0, 1, 2}, 3, WeightSpec::exp(1.0), 0.6));
    EXPECT_EQ(r33.a2_zero.count, 3);
    EXPECT_LE(r33.a2_eigenvalues.cwiseAbs().maxCoeff(), 1e-12);

    // l = 1: A1 = D^-1 1 1^t / (1^t D^-1 1) is rank one
    const OperatorBundle b = bundle_for({0, 1, 2, 3}, 1, WeightSpec::exp(0.3), 1.1);
    const Vector dinv = b.d.cwiseInverse();
    const Matrix rank_one = dinv * Vector::Ones(4).transpose() / dinv.sum();
    EXPECT_LT((b.A1 - rank_one).norm(), 1e-14);
    const std::vector<double> e = dense_eigs(b.A1);
    EXPECT_NEAR(e[0], 1.0, 1e-13);
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(e[i], 0.0, 1e-13);
}

TEST(Psd, Examples)
{
    // Shepard weights, x off the nodes; min eigenvalues frozen from a dense
    // symmetric solver at roundoff level (~ -1e-17, -4e-17)
    const PsdResult r = check_psd(bundle_for({0, 1, 2, 3, 4, 5}, 2, WeightSpec::shepard(1.0), 0.41));
    EXPECT_TRUE(r.pass);
    EXPECT_GE(r.a1_dinv_min, -1e-10 * r.scale);
    EXPECT_GE(r.minus_a2_dinv_min, -1e-10 * r.scale);
    EXPECT_LT(std::abs(r.a1_dinv_min), 1e-14);

    const PsdResult sq = check_psd(bundle_for({0, 1}, 2, WeightSpec::exp(1.0), 0.3));
    EXPECT_NEAR(sq.minus_a2_dinv_min, 0.0, 1e-14);
}

TEST(Norms, FrozenOracle)
{
    const OperatorBundle b = bundle_for({0, 1, 2, 3}, 2, WeightSpec::exp(0.5), 1.7);
    const NormResult r = check_norm_bounds(b);
    EXPECT_TRUE(r.pass);
    const auto& c = find(r.standard, "sigma_max(A1) sigma_min(D^-1) <= sigma_max(A1 D^-1)");
    EXPECT_NEAR(c.lhs, 0.13598439622068564, 1e-13);
    EXPECT_NEAR(c.rhs, 0.3692040248383124, 1e-13);
    const auto& d = find(r.standard, "sigma_max(A1) <= sigma_max(D)/sigma_min(D)");
    EXPECT_NEAR(d.lhs, 1.153651404997717, 1e-12);
    EXPECT_NEAR(d.rhs, 4.055199966844674, 1e-12);
    EXPECT_NEAR(find(r.standard, "||A1 D^-1|| <= 1/lambda_min(D)").rhs, 0.47799874091655, 1e-13);
}

TEST(Norms, SquareIsTight)
{
    const NormResult r = check_norm_bounds(bundle_for({0, 1, 2}, 3, WeightSpec::exp(1.0), 0.8));
    const auto& lower = find(r.standard, "1 <= sigma_max(A1)");
    EXPECT_NEAR(lower.rhs, 1.0, 1e-12);
    EXPECT_TRUE(r.pass);
}

TEST(Diagnose, RandomInstancesPass)
{
    InstanceOptions opt;
    opt.families = {WeightFamily::Exp, WeightFamily::Shepard, WeightFamily::McLain, WeightFamily::Levin};
    opt.max_dim = 2;
    InstanceGenerator gen(5, opt);
    for (int n = 0; n < 50; ++n) {
        const RandomInstance in = gen.next();
        const SpectralReport r = diagnose(MlsSystem::build(in.points, in.basis, in.weight, in.x));
        EXPECT_TRUE(r.pass) << "instance " << n;
        EXPECT_LE(r.idempotence, 1e-9);
    }
}

TEST(Diagnose, ZeroToleranceReportsFailures)
{
    Tolerances zero;
    zero.symmetry = 0.0;
    zero.eig_cluster = 0.0;
    const SpectralReport r = diagnose(
        MlsSystem::build(PointSet::line({0, 0.3, 1.1, 1.9, 2.4, 3.0}), BasisSpec::monomial(1, 3), WeightSpec::exp(1.0), 1.234),
        zero);
    EXPECT_FALSE(r.pass);
    EXPECT_GT(r.eigen.max_deviation, 0.0);
}

TEST(SvInequalities, Examples)
{
    const SvInequalityReport id = check_sv_inequalities(Matrix::Identity(3, 3), Matrix::Identity(3, 3));
    EXPECT_TRUE(id.pass);
    for (const auto& c : id.checks) EXPECT_NEAR(c.slack(), 0.0, 1e-15) << c.name;

    const Matrix U = Vector{{3.0, 2.0}}.asDiagonal();
    const Matrix V = Vector{{5.0, 4.0}}.asDiagonal();
    const SvInequalityReport r = check_sv_inequalities(U, V);
    EXPECT_TRUE(r.pass);
    const auto& prod = find(r.checks, "sigma_max(UV) <= sigma_max(U) sigma_max(V)");
    EXPECT_DOUBLE_EQ(prod.lhs, 15.0);
    EXPECT_DOUBLE_EQ(prod.rhs, 15.0);

    EXPECT_THROW(check_sv_inequalities(Matrix::Ones(2, 3), Matrix::Ones(2, 2)), PreconditionError);
}

TEST(SvInequalities, RandomShapes)
{
    std::mt19937_64 rng(9);
    const int shapes[][3] = {{3, 3, 3}, {5, 3, 2}, {2, 3, 5}, {4, 4, 1}, {1, 2, 6}};
    for (const auto& s : shapes)
        for (int n = 0; n < 100; ++n) {
            const Matrix U = random_gaussian(s[0], s[1], rng);
            const Matrix V = random_gaussian(s[1], s[2], rng);
            EXPECT_TRUE(check_sv_inequalities(U, V).pass);
        }
}

TEST(LuPearce, Examples)
{
    std::mt19937_64 rng(1);
    const Matrix V = random_symmetric(Vector{{2.0, -1.0, 0.5}}, rng);
    const LuPearceReport id = check_lu_pearce(Matrix::Identity(3, 3), V);
    EXPECT_TRUE(id.pass);
    EXPECT_LT((id.product_eigenvalues - id.v_eigenvalues).norm(), 1e-14);

    const Matrix U = Vector{{2.0, 1.0}}.asDiagonal();
    const Matrix W = Vector{{3.0, 5.0}}.asDiagonal();
    const LuPearceReport r = check_lu_pearce(U, W);
    EXPECT_TRUE(r.pass);
    EXPECT_TRUE(r.corollary_applicable);
    EXPECT_NEAR(r.product_eigenvalues(0), 6.0, 1e-14);
    EXPECT_NEAR(r.product_eigenvalues(1), 5.0, 1e-14);
    EXPECT_DOUBLE_EQ(find(r.checks, "lambda_k(VU) <= lambda_1(U) lambda_1(V), k=1").rhs, 10.0);
    EXPECT_DOUBLE_EQ(find(r.checks, "lambda_m(U) lambda_m(V) <= lambda_k(VU), k=2").lhs, 3.0);

    EXPECT_THROW(check_lu_pearce(Matrix{{1, 2}, {0, 1}}, Matrix::Identity(2, 2)), PreconditionError);
    EXPECT_THROW(check_lu_pearce(Matrix(Vector{{1.0, -1.0}}.asDiagonal()), Matrix(Vector{{-2.0, 1.0}}.asDiagonal())),
                 PreconditionError);
}

TEST(LuPearce, RolesFollowThePsdFactor)
{
    // U PSD and singular, V indefinite: VU can have negative eigenvalues even
    // though nu(U) = 0, so the inertia must come from V.
    std::mt19937_64 rng(4);
    const Matrix U = random_symmetric(Vector{{0.9, 0.4, 0.0, 0.0}}, rng);
    const Matrix V = random_symmetric(Vector{{1.5, 0.3, -0.7, -1.2}}, rng);
    const LuPearceReport r = check_lu_pearce(U, V);
    EXPECT_TRUE(r.roles_swapped);
    EXPECT_TRUE(r.pass);
    const std::vector<double> oracle = dense_eigs(V * U);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(r.product_eigenvalues(k), oracle[k], 1e-12);
}

TEST(LuPearce, RandomPairsAgainstDenseOracle)
{
    std::mt19937_64 rng(21);
    std::normal_distribution<double> nd;
    std::uniform_int_distribution<int> size(1, 6);
    for (int n = 0; n < 300; ++n) {
        const int m = size(rng);
        Vector eu(m), ev(m);
        for (int i = 0; i < m; ++i) {
            eu(i) = nd(rng);
            ev(i) = std::abs(nd(rng)) + (n % 2 ? 0.0 : 0.1);
        }
        if (n % 3 == 0) eu = eu.cwiseAbs().array() + 0.1;
        const Matrix U = random_symmetric(eu, rng), V = random_symmetric(ev, rng);
        const LuPearceReport r = check_lu_pearce(U, V);
        EXPECT_TRUE(r.pass) << "pair " << n;
        const std::vector<double> oracle = dense_eigs(V * U);
        for (int k = 0; k < m; ++k) EXPECT_NEAR(r.product_eigenvalues(k), oracle[k], 1e-10 * (1 + std::abs(oracle[k])));
    }
}
