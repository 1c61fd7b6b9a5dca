#include "mls/bound1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mls/error_analysis.hpp"
#include "mls/errors.hpp"

namespace mls {

std::string to_string(Convention c)
{
    return c == Convention::Standard ? "standard" : "paper";
}

Convention parse_convention(std::string_view name)
{
    if (name == "standard") return Convention::Standard;
    if (name == "paper") return Convention::Sqrt;
    throw ConfigError("unknown convention '" + std::string(name) + "'");
}

Vector build_H(double x, const PointSet& points, double alpha)
{
    if (points.dim() != 1)
        throw PreconditionError("build_H requires d = 1");
    return 2.0 * alpha * (Vector::Constant(points.size(), x) - points.nodes().col(0));
}

namespace {

Vector exp_D(double x, const Vector& nodes, double alpha)
{
    return 2.0 * (alpha * (x - nodes.array()).square()).exp();
}

double fd_residual(const Vector& nodes, double alpha, double x, double h)
{
    const Vector fd = (exp_D(x + h, nodes, alpha) - exp_D(x - h, nodes, alpha)) / (2.0 * h);
    const Vector analytic =
        (2.0 * alpha * (x - nodes.array())).matrix().cwiseProduct(exp_D(x, nodes, alpha));
    const double scale = analytic.cwiseAbs().maxCoeff();
    const double err = (fd - analytic).cwiseAbs().maxCoeff();
    if (scale == 0.0)
        return err;
    return err / scale;
}

} // namespace

FdCheck dD_dx_check(const PointSet& points, double alpha, double x, double h_fd)
{
    if (points.dim() != 1)
        throw PreconditionError("dD_dx_check requires d = 1");
    if (!(h_fd > 0.0))
        throw PreconditionError("finite-difference step must be positive");
    const Vector nodes = points.nodes().col(0);
    FdCheck r;
    r.residual = fd_residual(nodes, alpha, x, h_fd);
    r.coarse_residual = fd_residual(nodes, alpha, x, 10.0 * h_fd);
    // Truncation error shrinks 100x per decade of h; growth means roundoff dominates.
    r.step_warning = r.residual > r.coarse_residual && r.residual > 0.0;
    return r;
}

Vector DbarMatrix::singular_values() const
{
    return mls::singular_values(entries);
}

double DbarMatrix::norm() const
{
    return sigma_max(entries);
}

DbarMatrix build_dbar(int l)
{
    if (l < 1)
        throw PreconditionError("build_dbar: l must be positive");
    DbarMatrix d;
    d.l = l;
    d.entries = Matrix::Zero(l, l);
    for (int i = 1; i < l; ++i)
        d.entries(i, i - 1) = i;
    return d;
}

namespace {

Vector dc_dx(const BasisSpec& basis, double x)
{
    if (basis.dim() != 1)
        throw ConfigError("dc/dx requires a one-dimensional basis");
    if (basis.kind() == BasisKind::Monomial)
        return build_dbar(basis.size()).entries * basis.evaluate(x);
    return basis.derivative(x);
}

} // namespace

Vector ode_rhs(const MlsSystem& sys, const OperatorBundle& bundle, const BasisSpec& basis, const Tolerances& tol)
{
    if (sys.weight().family != WeightFamily::Exp)
        throw ConfigError("ode_rhs requires the exp weight family");
    if (sys.nodes().cols() != 1)
        throw PreconditionError("ode_rhs requires d = 1");
    const double x = sys.x()(0);
    const Vector h = 2.0 * sys.weight().alpha * (Vector::Constant(sys.m(), x) - sys.nodes().col(0));
    const Vector a = solve_coefficients(sys, tol);
    return bundle.A2 * h.cwiseProduct(a) + bundle.A0 * dc_dx(basis, x);
}

OdeFdStudy ode_fd_study(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight, double x,
                        const std::vector<double>& steps, const Tolerances& tol)
{
    const MlsSystem sys = MlsSystem::build(points, basis, weight, x);
    const OperatorBundle bundle = build_operators(sys, tol);
    const Vector rhs = ode_rhs(sys, bundle, basis, tol);
    const double a_norm = solve_coefficients(sys, tol).norm();
    const double rhs_norm = rhs.norm();
    auto a_at = [&](double t) { return solve_coefficients(MlsSystem::build(points, basis, weight, t), tol); };

    OdeFdStudy study;
    std::vector<double> fit_h, fit_err;
    for (double h : steps) {
        const Vector fd = (a_at(x + h) - a_at(x - h)) / (2.0 * h);
        const double err = (fd - rhs).norm() / rhs_norm;
        const double floor = 1e2 * std::numeric_limits<double>::epsilon() * a_norm / (h * rhs_norm);
        study.steps.push_back(h);
        study.errors.push_back(err);
        study.above_floor.push_back(err > floor);
        if (err > floor) {
            fit_h.push_back(h);
            fit_err.push_back(err);
        }
    }
    if (fit_h.size() >= 2)
        study.slope = fit_loglog_slope(fit_h, fit_err);
    return study;
}

BoundConstants compute_constants(const PointSet& points, const BasisSpec& basis, double alpha, Convention convention)
{
    if (points.dim() != 1)
        throw PreconditionError("compute_constants requires d = 1");
    if (points.size() < 2)
        throw DomainError("compute_constants: need at least two nodes (degenerate domain)");
    if (!basis.has_derivative())
        throw ConfigError("compute_constants: basis has no derivative");

    const int m = points.size();
    const int l = basis.size();
    const double x1 = points.nodes()(0, 0);
    const double xm = points.nodes()(m - 1, 0);

    BoundConstants k;
    k.convention = convention;
    k.alpha = alpha;
    k.r = xm - x1;
    k.sigma_min_Et = sigma_min(build_design(points, basis).transpose());

    const double growth = std::exp(alpha * k.r * k.r);
    const double a1_bound = convention == Convention::Standard ? growth : std::sqrt(growth);
    k.M2 = 2.0 * alpha * k.r * (1.0 + a1_bound);
    k.M11 = a1_bound / k.sigma_min_Et;

    double sup = 0.0;
    for (double x : uniform_grid(x1, xm, kM12GridPoints))
        sup = std::max(sup, dc_dx(basis, x).norm());
    k.M12_grid = sup;
    k.M12 = kM12Inflation * sup;
    k.M1 = k.M11 * k.M12;

    if (basis.kind() == BasisKind::Monomial) {
        const Vector c_end = basis.evaluate(xm);
        k.dbar_norm = build_dbar(l).norm();
        k.M22_sqrt = std::sqrt(static_cast<double>(l - 1)) * c_end.cwiseAbs().maxCoeff();
        if (std::abs(x1) <= std::abs(xm))
            k.M12_closed_form = static_cast<double>(l - 1) * c_end.norm();
    }
    return k;
}

int nearest_node(double x, const PointSet& points)
{
    if (points.dim() != 1)
        throw PreconditionError("nearest_node requires d = 1");
    int best = 0;
    double best_dist = std::abs(x - points.nodes()(0, 0));
    for (int i = 1; i < points.size(); ++i) {
        const double dist = std::abs(x - points.nodes()(i, 0));
        if (dist < best_dist) {
            best = i;
            best_dist = dist;
        }
    }
    return best;
}

std::optional<std::string> check_h2(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight)
{
    if (points.dim() != basis.dim() || !check_hypotheses(points, basis, weight).all())
        return "H2.1";
    if (!points.strictly_increasing())
        return "H2.2";
    if (!basis.has_derivative())
        return "H2.3";
    if (weight.family != WeightFamily::Exp)
        return "H2.4";
    return std::nullopt;
}

BoundCertificate certify_bound(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight,
                               const std::vector<double>& grid, Convention convention, const Tolerances& tol)
{
    if (auto failed = check_h2(points, basis, weight))
        throw HypothesisError(*failed, "hypothesis does not hold for the coefficient bound");
    if (points.size() < 2)
        throw DomainError("certify_bound: need at least two nodes (degenerate domain)");

    const int m = points.size();
    const double x1 = points.nodes()(0, 0);
    const double xm = points.nodes()(m - 1, 0);
    for (double x : grid)
        if (!(x >= x1 && x <= xm))
            throw PreconditionError("grid point " + std::to_string(x) + " outside [x_1, x_m]");

    BoundCertificate cert;
    cert.constants = compute_constants(points, basis, weight.alpha, convention);
    cert.tolerance = tol.bound;

    std::vector<std::optional<double>> anchor(static_cast<std::size_t>(m));
    auto anchor_norm = [&](int k) {
        auto& slot = anchor[static_cast<std::size_t>(k)];
        if (!slot)
            slot = solve_coefficients(MlsSystem::build(points, basis, weight, points.nodes()(k, 0)), tol).norm();
        return *slot;
    };

    const auto& K = cert.constants;
    cert.pass = true;
    cert.majorants_pass = true;
    cert.min_slack = std::numeric_limits<double>::infinity();
    cert.points.reserve(grid.size());
    for (double x : grid) {
        const MlsSystem sys = MlsSystem::build(points, basis, weight, x);
        const OperatorBundle bundle = build_operators(sys, tol);
        const Vector a = solve_coefficients(sys, tol);

        BoundPoint p;
        p.x = x;
        p.lhs = a.norm();
        p.k0 = nearest_node(x, points);
        const double dist = std::abs(x - points.nodes()(p.k0, 0));
        p.rhs = (anchor_norm(p.k0) + K.M1 * dist) * std::exp(K.M2 * dist);
        p.slack = p.rhs - p.lhs;

        const Vector h = build_H(x, points, weight.alpha);
        p.a2h_norm = norm2(bundle.A2 * h.asDiagonal());
        p.a0dc_norm = (bundle.A0 * dc_dx(basis, x)).norm();

        cert.pass = cert.pass && p.slack >= -tol.bound;
        cert.majorants_pass = cert.majorants_pass && p.a2h_norm <= K.M2 && p.a0dc_norm <= K.M1;
        cert.min_slack = std::min(cert.min_slack, p.slack);
        cert.points.push_back(p);
    }
    if (grid.empty())
        cert.min_slack = 0.0;
    return cert;
}

std::vector<double> uniform_grid(double a, double b, int n)
{
    if (n < 1)
        throw PreconditionError("grid needs at least one point");
    std::vector<double> g(static_cast<std::size_t>(n));
    if (n == 1) {
        g[0] = a;
        return g;
    }
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    g.back() = b;
    return g;
}

} // namespace mls
