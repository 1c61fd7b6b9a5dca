#include "mls/basis.hpp"

#include <cmath>

#include "mls/errors.hpp"

namespace mls {

namespace {

// Exponent tuples of total degree `degree` in d variables, x_1 power descending.
void compositions(int d, int degree, std::vector<int>& prefix, std::vector<std::vector<int>>& out)
{
    if (static_cast<int>(prefix.size()) == d - 1) {
        prefix.push_back(degree);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int k = degree; k >= 0; --k) {
        prefix.push_back(k);
        compositions(d, degree - k, prefix, out);
        prefix.pop_back();
    }
}

double ipow(double x, int k)
{
    double r = 1.0;
    for (int i = 0; i < k; ++i)
        r *= x;
    return r;
}

} // namespace

BasisSpec BasisSpec::monomial(int dim, int l)
{
    if (dim < 1)
        throw ConfigError("basis dimension must be positive");
    if (l < 1)
        throw ConfigError("basis size l must be positive");

    BasisSpec basis;
    basis.dim_ = dim;
    basis.kind_ = BasisKind::Monomial;
    for (int degree = 0; static_cast<int>(basis.exponents_.size()) < l; ++degree) {
        std::vector<std::vector<int>> level;
        std::vector<int> prefix;
        compositions(dim, degree, prefix, level);
        for (auto& e : level) {
            if (static_cast<int>(basis.exponents_.size()) == l)
                break;
            basis.exponents_.push_back(std::move(e));
        }
    }
    for (const auto& e : basis.exponents_) {
        basis.functions_.emplace_back([e](const Vector& x) {
            double v = 1.0;
            for (std::size_t k = 0; k < e.size(); ++k)
                v *= ipow(x(static_cast<Eigen::Index>(k)), e[k]);
            return v;
        });
    }
    return basis;
}

BasisSpec BasisSpec::custom(int dim, std::vector<Function> functions, std::optional<Derivative> derivative)
{
    if (dim < 1)
        throw ConfigError("basis dimension must be positive");
    if (functions.empty())
        throw ConfigError("custom basis needs at least one function");
    BasisSpec basis;
    basis.dim_ = dim;
    basis.kind_ = BasisKind::Custom;
    basis.functions_ = std::move(functions);
    basis.derivative_ = std::move(derivative);
    return basis;
}

Vector BasisSpec::evaluate(const Vector& x) const
{
    if (x.size() != dim_)
        throw PreconditionError("basis of dimension " + std::to_string(dim_) + " evaluated at a point of dimension " +
                                std::to_string(x.size()));
    Vector c(size());
    for (int j = 0; j < size(); ++j)
        c(j) = functions_[static_cast<std::size_t>(j)](x);
    return c;
}

Vector BasisSpec::evaluate(double x) const
{
    return evaluate(Vector::Constant(1, x));
}

Vector BasisSpec::derivative(double x) const
{
    if (dim_ != 1)
        throw ConfigError("dc/dx is defined for d = 1 only");
    if (kind_ == BasisKind::Monomial) {
        Vector dc = Vector::Zero(size());
        for (int j = 1; j < size(); ++j)
            dc(j) = j * ipow(x, j - 1);
        return dc;
    }
    if (!derivative_)
        throw ConfigError("custom basis has no analytic derivative");
    Vector dc = (*derivative_)(x);
    if (dc.size() != size())
        throw ConfigError("custom basis derivative has wrong length");
    return dc;
}

} // namespace mls
