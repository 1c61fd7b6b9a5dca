#pragma once

#include <string>
#include <vector>

#include "mls/linalg.hpp"
#include "mls/system.hpp"
#include "mls/tolerances.hpp"

namespace mls {

/// A0 = D^-1 E (E^t D^-1 E)^-1, A1 = A0 E^t, A2 = A1 - I and their products
/// with D^-1, all materialized for one MLS system.
struct OperatorBundle {
    Matrix A0;
    Matrix A1;
    Matrix A2;
    Matrix A1Dinv;
    Matrix A2Dinv;
    Vector d; // diagonal of D
    Matrix E;

    int m() const { return static_cast<int>(A1.rows()); }
    int l() const { return static_cast<int>(A0.cols()); }
};

/// Requires D strictly positive (PreconditionError otherwise) and a gram
/// condition within tolerance (ConditioningError otherwise).
OperatorBundle build_operators(const MlsSystem& sys, const Tolerances& tol = {});

/// One inequality lhs <= rhs (or equality lhs == rhs) with absolute slack
/// tolerance `tolerance`. Every flag can be recomputed from the stored
/// numbers.
struct InequalityCheck {
    enum class Kind { LessEqual, Equal };

    std::string name;
    Kind kind = Kind::LessEqual;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    bool pass = false;

    double slack() const { return rhs - lhs; }
};

/// lhs <= rhs + rel_tol * scale; scale defaults to max(|lhs|, |rhs|).
InequalityCheck less_equal(std::string name, double lhs, double rhs, double rel_tol, double scale = -1.0);
/// |lhs - rhs| <= rel_tol * scale; scale defaults to max(|lhs|, |rhs|).
InequalityCheck equal(std::string name, double lhs, double rhs, double rel_tol, double scale = -1.0);

struct SymmetryResult {
    double a1_dinv = 0.0;
    double a2_dinv = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Asymmetry ||M - M^t||_F of A1 D^-1 and A2 D^-1, relative to
/// max(||M||_F, ||D^-1||_F).
SymmetryResult check_symmetry(const OperatorBundle& bundle, const Tolerances& tol = {});

struct EigenCluster {
    double center = 0.0;
    int count = 0;
    int expected = 0;
    double max_deviation = 0.0;
};

struct EigenResult {
    Vector a1_eigenvalues; // ascending
    Vector a2_eigenvalues;
    EigenCluster a1_one, a1_zero, a2_zero, a2_minus_one;
    double max_deviation = 0.0;
    double trace_a1 = 0.0;
    // Deviation of the spectrum of A1 computed directly by a non-symmetric
    // solver from the symmetric route; informational.
    double nonsymmetric_deviation = 0.0;
    bool structural_failure = false;
    double tolerance = 0.0;
    bool pass = false;
};

/// Spectra of A1 and A2 through the symmetric matrix D^{1/2} (A_k D^-1) D^{1/2},
/// which is similar to A_k, clustered at {1, 0} and {0, -1}.
EigenResult eigen_structure(const OperatorBundle& bundle, const Tolerances& tol = {});

struct PsdResult {
    double a1_dinv_min = 0.0;
    double minus_a2_dinv_min = 0.0;
    double scale = 0.0; // ||D^-1||_2
    double tolerance = 0.0;
    bool pass = false;
};

PsdResult check_psd(const OperatorBundle& bundle, const Tolerances& tol = {});

struct NormResult {
    // Standard convention: ||.|| = sigma_max. Decides `pass`.
    std::vector<InequalityCheck> standard;
    // Square-root reading (||A1|| = sqrt(sigma_max(A1))); reported only.
    std::vector<InequalityCheck> sqrt_reading;
    bool pass = false;
};

NormResult check_norm_bounds(const OperatorBundle& bundle, const Tolerances& tol = {});

struct SvInequalityReport {
    std::vector<InequalityCheck> checks;
    bool pass = false;
};

/// Singular value inequalities for a (d1 x d2) matrix U and a (d3 x d4)
/// matrix V:
///   sigma_max(UV) <= sigma_max(U) sigma_max(V)                    (d2 = d3)
///   sigma_max(U^-1) = 1 / sigma_min(U)                            (U square, nonsingular)
///   sigma_max(V) sigma_min(U) <= sigma_max(UV)                    (d1 >= d2 = d3)
///   sigma_max(U) sigma_min(V) <= sigma_max(UV)                    (d4 >= d3 = d2)
///   ||U|| = sigma_max(U), sigma_i(U) = |lambda_i(U)|              (U symmetric)
/// Only the applicable ones are evaluated. Throws PreconditionError when
/// d2 != d3.
SvInequalityReport check_sv_inequalities(const Matrix& U, const Matrix& V, const Tolerances& tol = {});

struct LuPearceReport {
    Vector u_eigenvalues;       // descending
    Vector v_eigenvalues;       // descending
    Vector product_eigenvalues; // eigenvalues of VU, descending
    int positive = 0;           // pi of the inertia-carrying factor
    int negative = 0;           // nu of the inertia-carrying factor
    int zero = 0;               // xi, diagnostic only
    // The sandwiches only hold with the PSD matrix in the V slot. When only U
    // is PSD the theorem is applied to UV (same spectrum as VU) with the
    // roles exchanged, and this flag is set.
    bool roles_swapped = false;
    bool corollary_applicable = false;
    std::vector<InequalityCheck> checks;
    bool pass = false;
};

/// Eigenvalue sandwiches for VU with U, V symmetric and at least one of them
/// positive semi-definite; the two-sided product bound is added when both
/// are positive definite. Throws PreconditionError on non-symmetric input,
/// mismatched sizes, or when neither matrix is PSD.
LuPearceReport check_lu_pearce(const Matrix& U, const Matrix& V, const Tolerances& tol = {});

struct SpectralReport {
    SymmetryResult symmetry;
    EigenResult eigen;
    PsdResult psd;
    NormResult norms;
    double idempotence = 0.0; // ||A1^2 - A1|| / ||A1||
    bool idempotence_pass = false;
    Tolerances tolerances;
    bool pass = false;
};

/// All certified checks of one MLS system.
SpectralReport diagnose(const MlsSystem& sys, const Tolerances& tol = {});

} // namespace mls
