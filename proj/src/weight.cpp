#include "mls/weight.hpp"

#include <cmath>
#include <limits>

#include "mls/errors.hpp"

namespace mls {

std::string to_string(WeightFamily family)
{
    switch (family) {
    case WeightFamily::Exp: return "exp";
    case WeightFamily::Shepard: return "shepard";
    case WeightFamily::McLain: return "mclain";
    case WeightFamily::Levin: return "levin";
    case WeightFamily::Custom: return "custom";
    }
    return "unknown";
}

WeightFamily parse_weight_family(std::string_view name)
{
    if (name == "exp") return WeightFamily::Exp;
    if (name == "shepard") return WeightFamily::Shepard;
    if (name == "mclain") return WeightFamily::McLain;
    if (name == "levin") return WeightFamily::Levin;
    throw ConfigError("unknown weight family '" + std::string(name) + "'");
}

WeightSpec WeightSpec::custom(std::function<double(double)> w, bool singular_at_zero, bool smooth)
{
    WeightSpec spec;
    spec.family = WeightFamily::Custom;
    spec.custom_w = std::move(w);
    spec.custom_singular_at_zero = singular_at_zero;
    spec.custom_smooth = smooth;
    return spec;
}

bool WeightSpec::interpolating() const
{
    switch (family) {
    case WeightFamily::Exp: return false;
    case WeightFamily::Custom: return custom_singular_at_zero;
    default: return true;
    }
}

bool WeightSpec::smooth() const
{
    switch (family) {
    case WeightFamily::Shepard: {
        // |x - x_i|^(alpha^2) is smooth in x only for even integer powers.
        const double p = alpha * alpha;
        const double k = std::round(p / 2.0);
        return k >= 1.0 && std::abs(p - 2.0 * k) <= 1e-12 * p;
    }
    case WeightFamily::Custom: return custom_smooth;
    default: return true;
    }
}

WeightSpec WeightSpec::scaled(double gamma) const
{
    WeightSpec copy = *this;
    copy.scale *= gamma;
    return copy;
}

double weight_w(const WeightSpec& spec, double r)
{
    if (!(r >= 0.0))
        throw DomainError("weight_w: radius must be nonnegative");
    if (spec.family == WeightFamily::Custom) {
        if (!spec.custom_w)
            throw ConfigError("custom weight without a function");
        if (r == 0.0 && spec.custom_singular_at_zero)
            return 0.0;
        return spec.scale * spec.custom_w(r);
    }
    if (!(spec.alpha > 0.0))
        throw DomainError("weight_w: alpha must be positive");

    const double a = spec.alpha;
    double w = 0.0;
    switch (spec.family) {
    case WeightFamily::Exp: w = std::exp(a * r * r); break;
    case WeightFamily::Shepard: w = r == 0.0 ? 0.0 : std::pow(r, a * a); break;
    case WeightFamily::McLain: w = r * r * std::exp(-a * a * r * r); break;
    case WeightFamily::Levin: w = std::expm1(a * a * r * r); break;
    case WeightFamily::Custom: break;
    }
    return spec.scale * w;
}

double weight_W(const WeightSpec& spec, double r)
{
    const double w = weight_w(spec, r);
    return w == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / w;
}

} // namespace mls
