#pragma once

#include <string_view>

namespace mls {

/// Every threshold used by the certifying checks. Relative tolerances are
/// multiplied by the natural scale of the compared quantities.
struct Tolerances {
    double lin = 1e-9;          // partition of unity, reproduction, oracle agreement (relative)
    double scale_invariance = 1e-10;
    double oracle = 1e-8;       // solve vs brute-force normal equations
    double symmetry = 1e-10;    // ||M - M^t|| / ||M||
    double idempotence = 1e-9;  // ||A1^2 - A1|| / ||A1||
    double eig_cluster = 1e-8;  // max eigenvalue deviation from {1, 0} / {0, -1}
    double psd = 1e-10;         // min eigenvalue >= -psd * ||D^-1||
    double norm = 1e-12;        // singular value / eigenvalue inequalities (relative)
    double norm_a1 = 1e-10;     // 1 <= sigma_max(A1) <= kappa(D)
    double sv = 1e-12;          // generic singular value inequalities
    double bound = 1e-9;        // absolute slack of the coefficient-norm certificate
    double fd_ode = 0.3;        // allowed |slope - 2| of the ODE finite-difference study
    double max_gram_condition = 1e14;

    /// Sets a field by name; returns false for unknown keys.
    bool set(std::string_view key, double value);
};

} // namespace mls
