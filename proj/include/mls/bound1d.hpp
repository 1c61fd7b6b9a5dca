#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mls/basis.hpp"
#include "mls/linalg.hpp"
#include "mls/point_set.hpp"
#include "mls/spectral.hpp"
#include "mls/system.hpp"
#include "mls/tolerances.hpp"
#include "mls/weight.hpp"

// Exponential bound on the coefficient vector a(x) of one-dimensional MLS
// with exp weights w(r) = exp(alpha r^2). a(x) solves
//
//     da/dx = A2 H a + A0 dc/dx,     H = diag(2 alpha (x - x_i)),
//
// and Gronwall's inequality around the nearest node x_k0 gives
//
//     ||a(x)|| <= (||a(x_k0)|| + M1 |x - x_k0|) exp(M2 |x - x_k0|).
namespace mls {

// Standard: ||A||_2 = sigma_max(A). Sqrt: the square-root reading
// ||A|| = sqrt(sigma_max(A)), which gives smaller constants; selected by the
// token "paper" on the command line and reported only for comparison.
enum class Convention { Standard, Sqrt };

std::string to_string(Convention c);
Convention parse_convention(std::string_view name);

/// diag(2 alpha (x - x_i)), returned as its diagonal.
Vector build_H(double x, const PointSet& points, double alpha);

struct FdCheck {
    double residual = 0.0;        // max_i |FD_i - (HD)_i| / max_i |(HD)_i|
    double coarse_residual = 0.0; // same with step 10 h
    bool step_warning = false;    // residual grew when the step shrank
};

/// Central difference of D against dD/dx = H D.
FdCheck dD_dx_check(const PointSet& points, double alpha, double x, double h_fd);

/// A2 H a + A0 dc/dx at sys.x(). Requires an exp weight and a basis with a
/// derivative (ConfigError otherwise). Monomial bases use the
/// differentiation matrix.
Vector ode_rhs(const MlsSystem& sys, const OperatorBundle& bundle, const BasisSpec& basis,
               const Tolerances& tol = {});

/// Central differences of a(x) against ode_rhs for a sequence of steps.
/// A step is above the roundoff floor when its error exceeds
/// 1e2 eps ||a|| / (h ||rhs||); the slope is fitted on those steps only.
struct OdeFdStudy {
    std::vector<double> steps;
    std::vector<double> errors; // ||FD - rhs|| / ||rhs||
    std::vector<bool> above_floor;
    std::optional<double> slope;
};

OdeFdStudy ode_fd_study(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight, double x,
                        const std::vector<double>& steps, const Tolerances& tol = {});

/// l x l matrix with (i+1, i) entry i: dc/dx = Dbar c for the monomial basis.
struct DbarMatrix {
    int l = 1;
    Matrix entries;

    Vector singular_values() const;
    double norm() const;
};

DbarMatrix build_dbar(int l);

struct BoundConstants {
    double r = 0.0; // x_m - x_1
    double alpha = 0.0;
    double sigma_min_Et = 0.0;
    double M2 = 0.0;
    double M11 = 0.0;
    double M12 = 0.0;
    double M1 = 0.0;
    Convention convention = Convention::Standard;

    // Diagnostics kept alongside the constants.
    double M12_grid = 0.0;                    // sup ||dc/dx|| on the dense grid, before inflation
    std::optional<double> M12_closed_form;    // (l-1) ||c(x_m)||, monomial with |x_1| <= |x_m|
    std::optional<double> M22_sqrt;          // sqrt(l-1) max_i |p_i(x_m)|
    std::optional<double> dbar_norm;          // ||Dbar||_2, monomial bases
};

/// Grid size and inflation used for M12.
inline constexpr int kM12GridPoints = 10001;
inline constexpr double kM12Inflation = 1.01;

BoundConstants compute_constants(const PointSet& points, const BasisSpec& basis, double alpha,
                                 Convention convention = Convention::Standard);

/// Nearest node to x; ties go to the smaller index.
int nearest_node(double x, const PointSet& points);

struct BoundPoint {
    double x = 0.0;
    double lhs = 0.0; // ||a(x)||
    double rhs = 0.0;
    int k0 = 0; // 0-based here, 1-based in JSON output
    double slack = 0.0;
    double a2h_norm = 0.0;   // ||A2(x) H(x)||_2
    double a0dc_norm = 0.0;  // ||A0(x) dc/dx||_2
};

struct BoundCertificate {
    BoundConstants constants;
    std::vector<BoundPoint> points;
    double tolerance = 0.0;
    bool pass = false;           // slack >= -tolerance everywhere
    bool majorants_pass = false; // ||A2 H|| <= M2 and ||A0 dc/dx|| <= M1 everywhere
    double min_slack = 0.0;
};

/// Verifies H2 for the given data and returns the first failing item
/// ("H2.1" ... "H2.4") if any.
std::optional<std::string> check_h2(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight);

/// Throws HypothesisError naming the failed H2 item, PreconditionError for
/// grid points outside [x_1, x_m].
BoundCertificate certify_bound(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight,
                               const std::vector<double>& grid, Convention convention = Convention::Standard,
                               const Tolerances& tol = {});

/// n equally spaced points on [a, b].
std::vector<double> uniform_grid(double a, double b, int n);

} // namespace mls
