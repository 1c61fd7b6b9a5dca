#include "mls/system.hpp"

#include <cmath>

#include "mls/errors.hpp"

namespace mls {

Matrix build_design(const PointSet& points, const BasisSpec& basis)
{
    if (points.dim() != basis.dim())
        throw PreconditionError("basis dimension does not match point set dimension");
    Matrix E(points.size(), basis.size());
    for (int i = 0; i < points.size(); ++i)
        E.row(i) = basis.evaluate(points.node(i)).transpose();
    return E;
}

DiagonalMatrix build_weight_matrix(const Vector& x, const PointSet& points, const WeightSpec& spec)
{
    if (x.size() != points.dim())
        throw PreconditionError("evaluation point dimension does not match point set");
    Vector d(points.size());
    for (int i = 0; i < points.size(); ++i)
        d(i) = 2.0 * weight_w(spec, (x - points.node(i)).norm());
    return DiagonalMatrix(d);
}

MlsSystem MlsSystem::build(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight, const Vector& x)
{
    MlsSystem sys;
    sys.x_ = x;
    sys.nodes_ = points.nodes();
    sys.E_ = build_design(points, basis);
    sys.D_ = build_weight_matrix(x, points, weight);
    sys.c_ = basis.evaluate(x);
    sys.weight_ = weight;

    const Vector& d = sys.D_.diagonal();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d(i) == 0.0) {
            if ((x - points.node(static_cast<int>(i))).norm() != 0.0)
                throw DomainError("weight underflow: w vanishes away from node " + std::to_string(i));
            sys.zero_node_ = static_cast<std::size_t>(i);
        }
    }
    if (sys.d_positive())
        sys.factor();
    return sys;
}

MlsSystem MlsSystem::build(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight, double x)
{
    return build(points, basis, weight, Vector::Constant(1, x));
}

void MlsSystem::factor()
{
    d_inv_sqrt_ = D_.diagonal().array().sqrt().inverse();
    const Matrix scaled = d_inv_sqrt_.asDiagonal() * E_;
    const int m = this->m();
    const int l = this->l();
    if (l > m) {
        Q_.resize(0, 0);
        R_.resize(0, 0);
        gram_condition_ = std::numeric_limits<double>::infinity();
        return;
    }
    Eigen::HouseholderQR<Matrix> qr(scaled);
    Q_ = qr.householderQ() * Matrix::Identity(m, l);
    R_ = qr.matrixQR().topRows(l).triangularView<Eigen::Upper>();

    const Vector s = singular_values(R_);
    const double smin = s(s.size() - 1);
    if (!(smin > 0.0) || !std::isfinite(s(0)))
        gram_condition_ = std::numeric_limits<double>::infinity();
    else
        gram_condition_ = (s(0) / smin) * (s(0) / smin);
}

MlsSystem MlsSystem::scaled(double gamma) const
{
    MlsSystem copy = *this;
    copy.D_ = DiagonalMatrix(Vector(gamma * D_.diagonal()));
    copy.weight_ = weight_.scaled(gamma);
    if (copy.d_positive())
        copy.factor();
    return copy;
}

Vector solve_coefficients(const MlsSystem& sys, const Tolerances& tol)
{
    if (auto node = sys.zero_node())
        throw InterpolationLimit(*node);
    if (!(sys.gram_condition() <= tol.max_gram_condition))
        throw ConditioningError(sys.gram_condition());

    const Vector y = sys.R().transpose().triangularView<Eigen::Lower>().solve(sys.c());
    return sys.d_inv_sqrt().asDiagonal() * (sys.Q() * y);
}

double evaluate(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight, const Vector& x,
                const Tolerances& tol)
{
    const Vector& f = points.values();
    const MlsSystem sys = MlsSystem::build(points, basis, weight, x);
    if (auto node = sys.zero_node())
        return f(static_cast<Eigen::Index>(*node));
    return solve_coefficients(sys, tol).dot(f);
}

double evaluate(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight, double x,
                const Tolerances& tol)
{
    return evaluate(points, basis, weight, Vector::Constant(1, x), tol);
}

std::optional<std::string> HypothesisReport::first_failure() const
{
    if (!constant_in_span) return "H1.1";
    if (!l_le_m) return "H1.2";
    if (!full_rank) return "H1.3";
    if (!weight_smooth) return "H1.4";
    return std::nullopt;
}

HypothesisReport check_hypotheses(const PointSet& points, const BasisSpec& basis,
                                  const std::optional<WeightSpec>& weight)
{
    HypothesisReport report;
    report.m = points.size();
    report.l = basis.size();

    const Matrix E = build_design(points, basis);
    report.rank = numerical_rank(E.transpose());
    report.l_le_m = report.l >= 1 && report.l <= report.m;
    report.full_rank = report.rank == report.l;

    if (basis.kind() == BasisKind::Monomial) {
        report.constant_in_span = true;
    } else {
        // 1 lies in span{p_j} on the nodes iff the least-squares residual
        // of the ones vector against the columns of E vanishes.
        const Vector ones = Vector::Ones(report.m);
        const Vector coef = E.completeOrthogonalDecomposition().solve(ones);
        const double residual = (E * coef - ones).norm() / std::sqrt(static_cast<double>(report.m));
        report.constant_in_span = residual <= 1e-10;
    }
    if (weight)
        report.weight_smooth = weight->smooth();
    return report;
}

} // namespace mls
