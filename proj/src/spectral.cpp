#include "mls/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "mls/errors.hpp"

namespace mls {

namespace {

double default_scale(double lhs, double rhs, double scale)
{
    return scale >= 0.0 ? scale : std::max(std::abs(lhs), std::abs(rhs));
}

Vector descending(Vector v)
{
    std::sort(v.data(), v.data() + v.size(), std::greater<>());
    return v;
}

// Symmetric square root of a PSD matrix; tiny negative eigenvalues are clamped.
Matrix psd_sqrt(const Matrix& a)
{
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (a + a.transpose()));
    const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

bool is_psd(const Vector& eigenvalues, double scale, int n)
{
    const double cutoff = 16.0 * n * std::numeric_limits<double>::epsilon() * scale;
    return eigenvalues.size() == 0 || eigenvalues.minCoeff() >= -cutoff;
}

EigenCluster make_cluster(double center, int expected)
{
    EigenCluster c;
    c.center = center;
    c.expected = expected;
    return c;
}

// Assigns each eigenvalue to the nearer of two centers.
void assign(const Vector& values, EigenCluster& hi, EigenCluster& lo, double& max_dev)
{
    const double mid = 0.5 * (hi.center + lo.center);
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        EigenCluster& c = values(i) >= mid ? hi : lo;
        const double dev = std::abs(values(i) - c.center);
        ++c.count;
        c.max_deviation = std::max(c.max_deviation, dev);
        max_dev = std::max(max_dev, dev);
    }
}

} // namespace

InequalityCheck less_equal(std::string name, double lhs, double rhs, double rel_tol, double scale)
{
    InequalityCheck c;
    c.name = std::move(name);
    c.kind = InequalityCheck::Kind::LessEqual;
    c.lhs = lhs;
    c.rhs = rhs;
    c.tolerance = rel_tol * default_scale(lhs, rhs, scale);
    c.pass = lhs <= rhs + c.tolerance;
    return c;
}

InequalityCheck equal(std::string name, double lhs, double rhs, double rel_tol, double scale)
{
    InequalityCheck c;
    c.name = std::move(name);
    c.kind = InequalityCheck::Kind::Equal;
    c.lhs = lhs;
    c.rhs = rhs;
    c.tolerance = rel_tol * default_scale(lhs, rhs, scale);
    c.pass = std::abs(lhs - rhs) <= c.tolerance;
    return c;
}

OperatorBundle build_operators(const MlsSystem& sys, const Tolerances& tol)
{
    if (!sys.d_positive())
        throw PreconditionError("operators need a strictly positive D (evaluation point on a node with w(0) = 0)");
    if (!(sys.gram_condition() <= tol.max_gram_condition))
        throw ConditioningError(sys.gram_condition());

    const int m = sys.m();
    const int l = sys.l();
    OperatorBundle b;
    b.E = sys.E();
    b.d = sys.D().diagonal();

    const Matrix r_inv_t =
        sys.R().transpose().triangularView<Eigen::Lower>().solve(Matrix::Identity(l, l));
    b.A0 = sys.d_inv_sqrt().asDiagonal() * (sys.Q() * r_inv_t);
    b.A1 = b.A0 * b.E.transpose();
    b.A2 = b.A1 - Matrix::Identity(m, m);

    const Vector d_inv = b.d.cwiseInverse();
    b.A1Dinv = b.A1 * d_inv.asDiagonal();
    b.A2Dinv = b.A2 * d_inv.asDiagonal();
    return b;
}

SymmetryResult check_symmetry(const OperatorBundle& bundle, const Tolerances& tol)
{
    // Scale by ||D^-1|| as well: A2 D^-1 = A1 D^-1 - D^-1 vanishes up to
    // roundoff when m == l, so its own norm is no yardstick.
    const double dinv = bundle.d.cwiseInverse().norm();
    auto residual = [&](const Matrix& a) {
        const double scale = std::max(a.norm(), dinv);
        return scale == 0.0 ? 0.0 : (a - a.transpose()).norm() / scale;
    };
    SymmetryResult r;
    r.a1_dinv = residual(bundle.A1Dinv);
    r.a2_dinv = residual(bundle.A2Dinv);
    r.tolerance = tol.symmetry;
    r.pass = r.a1_dinv <= tol.symmetry && r.a2_dinv <= tol.symmetry;
    return r;
}

EigenResult eigen_structure(const OperatorBundle& bundle, const Tolerances& tol)
{
    const int m = bundle.m();
    const int l = bundle.l();
    const Vector d_sqrt = bundle.d.cwiseSqrt();

    EigenResult r;
    r.a1_eigenvalues = symmetric_eigenvalues(d_sqrt.asDiagonal() * bundle.A1Dinv * d_sqrt.asDiagonal());
    r.a2_eigenvalues = symmetric_eigenvalues(d_sqrt.asDiagonal() * bundle.A2Dinv * d_sqrt.asDiagonal());

    r.a1_one = make_cluster(1.0, l);
    r.a1_zero = make_cluster(0.0, m - l);
    r.a2_zero = make_cluster(0.0, l);
    r.a2_minus_one = make_cluster(-1.0, m - l);
    assign(r.a1_eigenvalues, r.a1_one, r.a1_zero, r.max_deviation);
    assign(r.a2_eigenvalues, r.a2_zero, r.a2_minus_one, r.max_deviation);
    r.trace_a1 = bundle.A1.trace();

    Eigen::EigenSolver<Matrix> direct(bundle.A1, false);
    std::vector<std::complex<double>> ev(direct.eigenvalues().data(), direct.eigenvalues().data() + m);
    std::sort(ev.begin(), ev.end(), [](auto a, auto b) { return a.real() < b.real(); });
    for (int i = 0; i < m; ++i)
        r.nonsymmetric_deviation = std::max(r.nonsymmetric_deviation, std::abs(ev[static_cast<std::size_t>(i)] - r.a1_eigenvalues(i)));

    r.structural_failure = r.max_deviation > 0.5;
    r.tolerance = tol.eig_cluster;
    const bool counts = r.a1_one.count == r.a1_one.expected && r.a1_zero.count == r.a1_zero.expected &&
                        r.a2_zero.count == r.a2_zero.expected && r.a2_minus_one.count == r.a2_minus_one.expected;
    r.pass = counts && !r.structural_failure && r.max_deviation <= tol.eig_cluster;
    return r;
}

PsdResult check_psd(const OperatorBundle& bundle, const Tolerances& tol)
{
    PsdResult r;
    r.a1_dinv_min = symmetric_eigenvalues(bundle.A1Dinv).minCoeff();
    r.minus_a2_dinv_min = symmetric_eigenvalues(-bundle.A2Dinv).minCoeff();
    r.scale = bundle.d.cwiseInverse().maxCoeff();
    r.tolerance = tol.psd;
    r.pass = r.a1_dinv_min >= -tol.psd * r.scale && r.minus_a2_dinv_min >= -tol.psd * r.scale;
    return r;
}

NormResult check_norm_bounds(const OperatorBundle& bundle, const Tolerances& tol)
{
    const double d_min = bundle.d.minCoeff();
    const double d_max = bundle.d.maxCoeff();
    const double kappa = d_max / d_min;
    const double inv_d_min = 1.0 / d_min;

    const double lambda_max = symmetric_eigenvalues(bundle.A1Dinv).maxCoeff();
    const double s_a1dinv = sigma_max(bundle.A1Dinv);
    const double s_a1 = sigma_max(bundle.A1);
    // sigma_min(D^-1) = 1 / lambda_max(D)
    const double s_min_dinv = 1.0 / d_max;

    NormResult r;
    r.standard.push_back(less_equal("lambda_max(A1 D^-1) <= 1/lambda_min(D)", lambda_max, inv_d_min, tol.norm));
    r.standard.push_back(less_equal("||A1 D^-1|| <= 1/lambda_min(D)", s_a1dinv, inv_d_min, tol.norm));
    r.standard.push_back(less_equal("sigma_max(A1) sigma_min(D^-1) <= sigma_max(A1 D^-1)", s_a1 * s_min_dinv,
                                    s_a1dinv, tol.norm));
    r.standard.push_back(less_equal("1 <= sigma_max(A1)", 1.0, s_a1, tol.norm_a1));
    r.standard.push_back(less_equal("sigma_max(A1) <= sigma_max(D)/sigma_min(D)", s_a1, kappa, tol.norm_a1));

    const double root = std::sqrt(s_a1);
    r.sqrt_reading.push_back(less_equal("1 <= sqrt(sigma_max(A1))", 1.0, root, tol.norm_a1));
    r.sqrt_reading.push_back(less_equal("sqrt(sigma_max(A1)) <= sqrt(kappa(D))", root, std::sqrt(kappa), tol.norm_a1));
    r.sqrt_reading.push_back(less_equal("sigma_max(A1) <= sqrt(kappa(D))", s_a1, std::sqrt(kappa), tol.norm_a1));

    r.pass = std::all_of(r.standard.begin(), r.standard.end(), [](const auto& c) { return c.pass; });
    return r;
}

SvInequalityReport check_sv_inequalities(const Matrix& U, const Matrix& V, const Tolerances& tol)
{
    const auto d1 = U.rows(), d2 = U.cols(), d3 = V.rows(), d4 = V.cols();
    if (d2 != d3)
        throw PreconditionError("check_sv_inequalities: inner dimensions differ (need d2 == d3, got " +
                                std::to_string(d2) + " and " + std::to_string(d3) + ")");

    const Matrix UV = U * V;
    const double s_uv = sigma_max(UV);
    const double s_u = sigma_max(U);
    const double s_v = sigma_max(V);

    SvInequalityReport r;
    r.checks.push_back(less_equal("sigma_max(UV) <= sigma_max(U) sigma_max(V)", s_uv, s_u * s_v, tol.sv));
    if (d1 == d2) {
        Eigen::FullPivLU<Matrix> lu(U);
        if (lu.isInvertible()) {
            const double s_min = sigma_min(U);
            r.checks.push_back(equal("sigma_max(U^-1) == 1/sigma_min(U)", sigma_max(lu.inverse()), 1.0 / s_min,
                                     tol.sv * std::max(1.0, s_u / s_min)));
        }
    }
    if (d1 >= d2)
        r.checks.push_back(less_equal("sigma_max(V) sigma_min(U) <= sigma_max(UV)", s_v * sigma_min(U), s_uv, tol.sv));
    if (d4 >= d3)
        r.checks.push_back(less_equal("sigma_max(U) sigma_min(V) <= sigma_max(UV)", s_u * sigma_min(V), s_uv, tol.sv));
    if (d1 == d2 && symmetry_residual(U) <= 1e-14) {
        // Operator norm via the Rayleigh quotient of U^t U, independent of the SVD.
        const double op = std::sqrt(std::max(0.0, symmetric_eigenvalues(U.transpose() * U).maxCoeff()));
        r.checks.push_back(equal("||U|| == sigma_max(U)", op, s_u, tol.sv * 16.0));
        Vector abs_eig = symmetric_eigenvalues(U).cwiseAbs();
        abs_eig = descending(abs_eig);
        const Vector s = singular_values(U);
        double worst = 0.0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            worst = std::max(worst, std::abs(s(i) - abs_eig(i)));
        r.checks.push_back(equal("max_i |sigma_i(U) - |lambda_i(U)||", worst, 0.0, tol.sv * 16.0, s_u));
    }
    r.pass = std::all_of(r.checks.begin(), r.checks.end(), [](const auto& c) { return c.pass; });
    return r;
}

LuPearceReport check_lu_pearce(const Matrix& U, const Matrix& V, const Tolerances& tol)
{
    if (U.rows() != U.cols() || V.rows() != V.cols() || U.rows() != V.rows())
        throw PreconditionError("check_lu_pearce: U and V must be square of equal size");
    const double sym_tol = 1e-12;
    if (symmetry_residual(U) > sym_tol)
        throw PreconditionError("check_lu_pearce: U is not symmetric");
    if (symmetry_residual(V) > sym_tol)
        throw PreconditionError("check_lu_pearce: V is not symmetric");

    const int m = static_cast<int>(U.rows());
    LuPearceReport r;
    const Vector eu = symmetric_eigenvalues(U);
    const Vector ev = symmetric_eigenvalues(V);
    r.u_eigenvalues = descending(eu);
    r.v_eigenvalues = descending(ev);

    const double u_norm = eu.cwiseAbs().maxCoeff();
    const double v_norm = ev.cwiseAbs().maxCoeff();
    const bool u_psd = is_psd(eu, u_norm, m);
    const bool v_psd = is_psd(ev, v_norm, m);
    if (!u_psd && !v_psd)
        throw PreconditionError("check_lu_pearce: neither U nor V is positive semi-definite");

    // VU is similar (up to zero-padding of AB vs BA) to a symmetric matrix
    // built from the square root of the PSD factor.
    Matrix sym;
    if (u_psd) {
        const Matrix root = psd_sqrt(U);
        sym = root * V * root;
    } else {
        const Matrix root = psd_sqrt(V);
        sym = root * U * root;
    }
    r.product_eigenvalues = descending(symmetric_eigenvalues(sym));

    // eig(VU) == eig(UV): put the PSD factor in the V slot.
    r.roles_swapped = !v_psd;
    const Vector ua = r.roles_swapped ? r.v_eigenvalues : r.u_eigenvalues;
    const Vector vb = r.roles_swapped ? r.u_eigenvalues : r.v_eigenvalues;
    const double ua_norm = r.roles_swapped ? v_norm : u_norm;

    const double zero_cut = 16.0 * m * std::numeric_limits<double>::epsilon() * ua_norm;
    for (int i = 0; i < m; ++i) {
        const double e = ua(i);
        if (e > zero_cut) ++r.positive;
        else if (e < -zero_cut) ++r.negative;
        else ++r.zero;
    }

    const double scale = std::max(u_norm * v_norm, std::numeric_limits<double>::min());
    // 1-based accessors, matching the usual statement of the theorem.
    auto u = [&](int i) { return ua(i - 1); };
    auto v = [&](int i) { return vb(i - 1); };
    for (int k = 1; k <= m; ++k) {
        const double lk = r.product_eigenvalues(k - 1);
        const std::string tag = "k=" + std::to_string(k);
        if (k <= r.positive) {
            double upper = std::numeric_limits<double>::infinity();
            double lower = -std::numeric_limits<double>::infinity();
            for (int i = 1; i <= k; ++i) upper = std::min(upper, u(i) * v(k + 1 - i));
            for (int i = k; i <= m; ++i) lower = std::max(lower, u(i) * v(m + k - i));
            r.checks.push_back(less_equal("lambda_k(VU) <= min u_i v_(k+1-i), " + tag, lk, upper, tol.norm, scale));
            r.checks.push_back(less_equal("max u_i v_(m+k-i) <= lambda_k(VU), " + tag, lower, lk, tol.norm, scale));
        } else if (k <= m - r.negative) {
            r.checks.push_back(equal("lambda_k(VU) == 0, " + tag, lk, 0.0, tol.norm, scale));
        } else {
            double upper = std::numeric_limits<double>::infinity();
            double lower = -std::numeric_limits<double>::infinity();
            for (int i = 1; i <= k; ++i) upper = std::min(upper, u(i) * v(m + i - k));
            for (int i = k; i <= m; ++i) lower = std::max(lower, u(i) * v(i + 1 - k));
            r.checks.push_back(less_equal("lambda_k(VU) <= min u_i v_(m+i-k), " + tag, lk, upper, tol.norm, scale));
            r.checks.push_back(less_equal("max u_i v_(i+1-k) <= lambda_k(VU), " + tag, lower, lk, tol.norm, scale));
        }
    }

    r.corollary_applicable = u_psd && v_psd && u(m) > 0.0 && v(m) > 0.0;
    if (r.corollary_applicable) {
        for (int k = 1; k <= m; ++k) {
            const double lk = r.product_eigenvalues(k - 1);
            const std::string tag = "k=" + std::to_string(k);
            r.checks.push_back(less_equal("lambda_k(VU) <= lambda_1(U) lambda_1(V), " + tag, lk, u(1) * v(1), tol.norm, scale));
            r.checks.push_back(less_equal("lambda_m(U) lambda_m(V) <= lambda_k(VU), " + tag, u(m) * v(m), lk, tol.norm, scale));
        }
    }
    r.pass = std::all_of(r.checks.begin(), r.checks.end(), [](const auto& c) { return c.pass; });
    return r;
}

SpectralReport diagnose(const MlsSystem& sys, const Tolerances& tol)
{
    const OperatorBundle bundle = build_operators(sys, tol);
    SpectralReport r;
    r.tolerances = tol;
    r.symmetry = check_symmetry(bundle, tol);
    r.eigen = eigen_structure(bundle, tol);
    r.psd = check_psd(bundle, tol);
    r.norms = check_norm_bounds(bundle, tol);
    const double a1_norm = norm2(bundle.A1);
    r.idempotence = a1_norm == 0.0 ? 0.0 : norm2(bundle.A1 * bundle.A1 - bundle.A1) / a1_norm;
    r.idempotence_pass = r.idempotence <= tol.idempotence;
    r.pass = r.symmetry.pass && r.eigen.pass && r.psd.pass && r.norms.pass && r.idempotence_pass;
    return r;
}

} // namespace mls
