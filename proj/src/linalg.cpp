#include "mls/linalg.hpp"

#include <algorithm>
#include <limits>

namespace mls {

Vector singular_values(const Matrix& a)
{
    if (a.size() == 0)
        return Vector();
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues();
}

double sigma_max(const Matrix& a)
{
    if (a.size() == 0)
        return 0.0;
    return singular_values(a)(0);
}

double sigma_min(const Matrix& a)
{
    if (a.size() == 0)
        return 0.0;
    const Vector s = singular_values(a);
    return s(s.size() - 1);
}

Vector symmetric_eigenvalues(const Matrix& a)
{
    const Matrix sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    return eig.eigenvalues();
}

int numerical_rank(const Matrix& a)
{
    if (a.size() == 0)
        return 0;
    const Vector s = singular_values(a);
    const double cutoff = static_cast<double>(std::max(a.rows(), a.cols())) * s(0) *
                          std::numeric_limits<double>::epsilon() * 16.0;
    return static_cast<int>((s.array() > cutoff).count());
}

double symmetry_residual(const Matrix& a)
{
    const double n = a.norm();
    if (n == 0.0)
        return 0.0;
    return (a - a.transpose()).norm() / n;
}

} // namespace mls
