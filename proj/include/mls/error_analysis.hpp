#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "mls/basis.hpp"
#include "mls/linalg.hpp"
#include "mls/point_set.hpp"
#include "mls/tolerances.hpp"
#include "mls/weight.hpp"

namespace mls {

using ScalarFunction = std::function<double(double)>;

/// 1 + sum |a_i|, the factor multiplying the best-approximation error in
/// |f(x) - L^f(x)| <= ||f - p||_inf (1 + sum |a_i|).
double amplification(const Vector& a);

/// max over `grid` of |f(x) - L^f(x)|. `points` must carry values.
double sup_error(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight,
                 const std::vector<double>& grid, const ScalarFunction& f, const Tolerances& tol = {});

struct MinimaxFit {
    Vector coefficients; // in the monomial basis 1, x, ..., x^(l-1)
    double max_error = 0.0;
    int iterations = 0;
};

/// Best uniform approximation of f on the finite set `grid` by polynomials
/// of degree l - 1: Lawson's iteratively reweighted least squares, then a
/// discrete exchange on the reference Lawson singles out. `max_error` is the
/// grid sup error of the returned polynomial, so it is always attained.
MinimaxFit discrete_minimax(const std::vector<double>& grid, const ScalarFunction& f, int l, int max_iterations = 500);

/// Least-squares slope of log(err) against log(h).
double fit_loglog_slope(const std::vector<double>& h, const std::vector<double>& err);

enum class AlphaScaling { InverseSquareH, Fixed };

/// Shape parameter at fill distance h that keeps the weight profile
/// w(r) a function of r/h: alpha0/h^2 for exp, alpha0/h for McLain and
/// Levin (alpha enters squared), alpha0 for Shepard.
double scaled_alpha(WeightFamily family, double alpha0, double h, AlphaScaling scaling);

struct ConvergenceOptions {
    double a = 0.0;
    double b = 3.0;
    double h0 = 0.2;
    int levels = 3;
    int l = 2;
    WeightFamily family = WeightFamily::Exp;
    double alpha0 = 1.0;
    AlphaScaling scaling = AlphaScaling::InverseSquareH;
    int eval_per_h = 10;   // evaluation grid spacing h / eval_per_h
    int dense_factor = 10; // minimax grid is this much denser than the evaluation grid
};

struct ConvergenceLevel {
    double h = 0.0;
    double alpha = 0.0;
    int nodes = 0;
    double sup_error = 0.0;
    double amplification = 0.0; // max over the evaluation grid
    bool saturated = false;
    double minimax_error = 0.0;  // grid estimate of ||f - p*||_inf
    double error_bound_ratio = 0.0; // max_x |f - L^f| / (||f - p*|| (1 + sum|a_i|))
    int bound_violations = 0;    // ratio > 1.05
    int bound_near_violations = 0; // 1 < ratio <= 1.05, reported only
    std::optional<double> observed_order_cum;
};

struct ConvergenceStudy {
    std::vector<ConvergenceLevel> levels;
    std::optional<double> observed_order;
    int fitted_levels = 0;
    bool exact_reproduction = false; // every level saturated
    bool error_bound_pass = false;   // no level with bound_violations
};

/// Uniform nodes with spacing h0, h0/2, ...; requires at least 3 levels and
/// (b - a)/h0 integral.
ConvergenceStudy convergence_study(const ScalarFunction& f, const ConvergenceOptions& options,
                                   const Tolerances& tol = {});

/// "sin", "cos", "exp", "runge" (1/(1 + 25 x^2)), "linear" (1 + 2x),
/// "quadratic" (1 - x + x^2/2).
ScalarFunction named_function(std::string_view name);

} // namespace mls
