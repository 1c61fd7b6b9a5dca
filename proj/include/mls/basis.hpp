#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mls/linalg.hpp"

namespace mls {

enum class BasisKind { Monomial, Custom };

/// Ordered basis p_1..p_l of P_l. Monomial bases are graded by total
/// degree (1, x, y, x^2, xy, y^2, ... for d = 2); for d = 1 they are
/// 1, x, ..., x^(l-1). Custom bases may carry an analytic derivative
/// dc/dx for d = 1.
class BasisSpec {
public:
    using Function = std::function<double(const Vector&)>;
    using Derivative = std::function<Vector(double)>;

    static BasisSpec monomial(int dim, int l);
    static BasisSpec custom(int dim, std::vector<Function> functions, std::optional<Derivative> derivative = std::nullopt);

    int size() const { return static_cast<int>(functions_.size()); }
    int dim() const { return dim_; }
    BasisKind kind() const { return kind_; }

    /// c(x) = (p_1(x), ..., p_l(x))^t
    Vector evaluate(const Vector& x) const;
    Vector evaluate(double x) const;

    /// Exponent tuples of a monomial basis, one per function.
    const std::vector<std::vector<int>>& exponents() const { return exponents_; }

    bool has_derivative() const { return kind_ == BasisKind::Monomial ? dim_ == 1 : derivative_.has_value(); }

    /// dc/dx for d = 1. Monomials use the differentiation matrix; custom
    /// bases need a supplied derivative (ConfigError otherwise).
    Vector derivative(double x) const;

private:
    BasisSpec() = default;

    int dim_ = 1;
    BasisKind kind_ = BasisKind::Monomial;
    std::vector<Function> functions_;
    std::vector<std::vector<int>> exponents_;
    std::optional<Derivative> derivative_;
};

} // namespace mls
