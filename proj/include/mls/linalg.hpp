#pragma once

#include <Eigen/Dense>

namespace mls {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Singular values in descending order.
Vector singular_values(const Matrix& a);

double sigma_max(const Matrix& a);

/// Smallest of the min(rows, cols) singular values.
double sigma_min(const Matrix& a);

/// Spectral norm (largest singular value).
inline double norm2(const Matrix& a) { return sigma_max(a); }

/// Eigenvalues of the symmetric part (a + a^t)/2, ascending.
Vector symmetric_eigenvalues(const Matrix& a);

/// Number of singular values above max(rows, cols) * sigma_max * eps * 16.
int numerical_rank(const Matrix& a);

/// ||a - a^t||_F / ||a||_F, or 0 for the zero matrix.
double symmetry_residual(const Matrix& a);

} // namespace mls
