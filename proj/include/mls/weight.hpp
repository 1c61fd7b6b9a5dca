#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace mls {

enum class WeightFamily { Exp, Shepard, McLain, Levin, Custom };

std::string to_string(WeightFamily family);
WeightFamily parse_weight_family(std::string_view name);

/// Weight family plus shape parameter alpha. Every family is expressed
/// through the reciprocal function w(r) = 1/W(r) that fills D:
///
///   Exp      w(r) = exp(alpha r^2)              W(0) = 1
///   Shepard  w(r) = r^(alpha^2)                 W(0) = inf
///   McLain   w(r) = r^2 exp(-alpha^2 r^2)       W(0) = inf
///   Levin    w(r) = exp(alpha^2 r^2) - 1        W(0) = inf
///
/// Custom weights supply w directly; `custom_singular_at_zero` states
/// whether W(0) = inf, and `custom_smooth` feeds the H1.4 flag.
struct WeightSpec {
    WeightFamily family = WeightFamily::Exp;
    double alpha = 1.0;
    // Multiplies every w(r); 1 except in weight-scale invariance checks.
    double scale = 1.0;
    std::function<double(double)> custom_w;
    bool custom_singular_at_zero = false;
    bool custom_smooth = true;

    static WeightSpec make(WeightFamily family, double alpha)
    {
        WeightSpec spec;
        spec.family = family;
        spec.alpha = alpha;
        return spec;
    }
    static WeightSpec exp(double alpha) { return make(WeightFamily::Exp, alpha); }
    static WeightSpec shepard(double alpha) { return make(WeightFamily::Shepard, alpha); }
    static WeightSpec mclain(double alpha) { return make(WeightFamily::McLain, alpha); }
    static WeightSpec levin(double alpha) { return make(WeightFamily::Levin, alpha); }
    static WeightSpec custom(std::function<double(double)> w, bool singular_at_zero, bool smooth = true);

    /// True when W(0) = inf, i.e. w(0) = 0 and the scheme interpolates.
    bool interpolating() const;

    /// H1.4: w is C-infinity as a function of the evaluation point.
    bool smooth() const;

    WeightSpec scaled(double gamma) const;
};

/// Reciprocal weight w(r). Throws DomainError for r < 0 or alpha <= 0.
double weight_w(const WeightSpec& spec, double r);

/// W(r) = 1/w(r); +inf where w vanishes.
double weight_W(const WeightSpec& spec, double r);

} // namespace mls
