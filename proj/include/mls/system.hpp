#pragma once

#include <limits>
#include <optional>
#include <string>

#include "mls/basis.hpp"
#include "mls/linalg.hpp"
#include "mls/point_set.hpp"
#include "mls/tolerances.hpp"
#include "mls/weight.hpp"

namespace mls {

using DiagonalMatrix = Eigen::DiagonalMatrix<double, Eigen::Dynamic>;

/// E[i][j] = p_j(x_i); rows are nodes.
Matrix build_design(const PointSet& points, const BasisSpec& basis);

/// D = 2 diag(w(|x - x_i|)).
DiagonalMatrix build_weight_matrix(const Vector& x, const PointSet& points, const WeightSpec& spec);

/// The MLS system at one evaluation point. When D is strictly positive the
/// thin QR factorization of D^{-1/2} E is cached; the gram matrix
/// E^t D^-1 E equals R^t R.
class MlsSystem {
public:
    static MlsSystem build(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight, const Vector& x);
    static MlsSystem build(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight, double x);

    const Vector& x() const { return x_; }
    const Matrix& E() const { return E_; }
    const DiagonalMatrix& D() const { return D_; }
    const Vector& c() const { return c_; }
    const WeightSpec& weight() const { return weight_; }
    const Matrix& nodes() const { return nodes_; }
    int m() const { return static_cast<int>(E_.rows()); }
    int l() const { return static_cast<int>(E_.cols()); }

    /// Index of the node at which D vanishes (x coincides with it and w(0) = 0).
    std::optional<std::size_t> zero_node() const { return zero_node_; }
    bool d_positive() const { return !zero_node_; }

    /// Factors of D^{-1/2} E = Q R. Valid only when d_positive().
    const Matrix& Q() const { return Q_; }
    const Matrix& R() const { return R_; }
    const Vector& d_inv_sqrt() const { return d_inv_sqrt_; }

    /// cond_2(E^t D^-1 E) = cond_2(R)^2; +inf when singular or D not positive.
    double gram_condition() const { return gram_condition_; }

    /// Copy with D replaced by gamma D.
    MlsSystem scaled(double gamma) const;

private:
    void factor();

    Vector x_;
    Matrix nodes_;
    Matrix E_;
    DiagonalMatrix D_;
    Vector c_;
    WeightSpec weight_;
    std::optional<std::size_t> zero_node_;
    Vector d_inv_sqrt_;
    Matrix Q_;
    Matrix R_;
    double gram_condition_ = std::numeric_limits<double>::infinity();
};

/// a = D^-1 E (E^t D^-1 E)^-1 c, computed as D^{-1/2} Q R^{-t} c.
///
/// Throws InterpolationLimit when D has a zero diagonal entry and
/// ConditioningError when the gram condition exceeds
/// `tol.max_gram_condition`.
Vector solve_coefficients(const MlsSystem& sys, const Tolerances& tol = {});

/// L^f(x) = sum a_i f(x_i). At a node with w(0) = 0 returns the node value.
double evaluate(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight, const Vector& x,
                const Tolerances& tol = {});
double evaluate(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight, double x,
                const Tolerances& tol = {});

struct HypothesisReport {
    int m = 0;
    int l = 0;
    int rank = 0;
    bool constant_in_span = false; // H1.1
    bool l_le_m = false;           // H1.2
    bool full_rank = false;        // H1.3
    bool weight_smooth = true;     // H1.4

    bool all() const { return constant_in_span && l_le_m && full_rank && weight_smooth; }

    /// Name of the first failing item ("H1.1" ... "H1.4"), if any.
    std::optional<std::string> first_failure() const;
};

HypothesisReport check_hypotheses(const PointSet& points, const BasisSpec& basis,
                                  const std::optional<WeightSpec>& weight = std::nullopt);

} // namespace mls
