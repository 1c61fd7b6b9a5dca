#include "mls/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mls/bound1d.hpp"
#include "mls/errors.hpp"
#include "mls/system.hpp"

namespace mls {

double amplification(const Vector& a)
{
    return 1.0 + a.cwiseAbs().sum();
}

double sup_error(const PointSet& points, const BasisSpec& basis, const WeightSpec& weight,
                 const std::vector<double>& grid, const ScalarFunction& f, const Tolerances& tol)
{
    double worst = 0.0;
    for (double x : grid)
        worst = std::max(worst, std::abs(f(x) - evaluate(points, basis, weight, x, tol)));
    return worst;
}

MinimaxFit discrete_minimax(const std::vector<double>& grid, const ScalarFunction& f, int l, int max_iterations)
{
    if (l < 1)
        throw PreconditionError("discrete_minimax: l must be positive");
    if (static_cast<int>(grid.size()) < l)
        throw PreconditionError("discrete_minimax: fewer grid points than unknowns");

    const auto n = static_cast<Eigen::Index>(grid.size());
    const auto [lo_it, hi_it] = std::minmax_element(grid.begin(), grid.end());
    const double mid = 0.5 * (*lo_it + *hi_it);
    const double half = std::max(0.5 * (*hi_it - *lo_it), std::numeric_limits<double>::min());

    // Work in t = (x - mid)/half for conditioning, convert back at the end.
    Matrix V(n, l);
    Vector y(n), ts(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = (grid[static_cast<std::size_t>(i)] - mid) / half;
        ts(i) = t;
        double p = 1.0;
        for (int j = 0; j < l; ++j) {
            V(i, j) = p;
            p *= t;
        }
        y(i) = f(grid[static_cast<std::size_t>(i)]);
    }

    Vector u = Vector::Constant(n, 1.0 / static_cast<double>(n));
    Vector best_coef;
    double best_err = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < max_iterations; ++it) {
        const Vector s = u.cwiseSqrt();
        const Vector coef = (s.asDiagonal() * V).colPivHouseholderQr().solve(s.cwiseProduct(y));
        const Vector r = (V * coef - y).cwiseAbs();
        const double err = r.maxCoeff();
        if (err < best_err) {
            best_err = err;
            best_coef = coef;
        }
        const double total = u.dot(r);
        if (!(total > 0.0))
            break;
        const Vector next = u.cwiseProduct(r) / total;
        if ((next - u).cwiseAbs().maxCoeff() < 1e-15)
            break;
        u = next;
    }

    // Lawson converges linearly; finish with a single-point (Stiefel)
    // exchange on the reference where Lawson's weights concentrate.
    if (n > l) {
        std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::partial_sort(order.begin(), order.begin() + (l + 1), order.end(),
                          [&](auto a, auto b) { return u(a) > u(b); });
        std::vector<Eigen::Index> ref(order.begin(), order.begin() + (l + 1));
        std::sort(ref.begin(), ref.end(), [&](auto a, auto b) { return ts(a) < ts(b); });
        for (int pass = 0; pass < 200; ++pass) {
            Matrix A(l + 1, l + 1);
            Vector rhs(l + 1);
            for (int k = 0; k <= l; ++k) {
                A.row(k).head(l) = V.row(ref[static_cast<std::size_t>(k)]);
                A(k, l) = (k % 2 == 0) ? 1.0 : -1.0;
                rhs(k) = y(ref[static_cast<std::size_t>(k)]);
            }
            const Vector sol = A.partialPivLu().solve(rhs);
            if (!sol.allFinite())
                break;
            const Vector coef = sol.head(l);
            const double level = std::abs(sol(l));
            const Vector res = V * coef - y;
            Eigen::Index worst = 0;
            const double err = res.cwiseAbs().maxCoeff(&worst);
            ++it;
            if (err < best_err) {
                best_err = err;
                best_coef = coef;
            }
            if (err <= level * (1.0 + 1e-13) + 1e-300)
                break;
            if (std::find(ref.begin(), ref.end(), worst) != ref.end())
                break;
            // Insert `worst` keeping the residual signs alternating.
            const double tw = ts(worst);
            auto t_of = [&](std::size_t k) { return ts(ref[k]); };
            auto same_sign = [&](std::size_t k) { return (res(ref[k]) > 0) == (res(worst) > 0); };
            const std::size_t last = ref.size() - 1;
            if (tw > t_of(0) && tw < t_of(last)) {
                std::size_t k = 0;
                while (t_of(k + 1) < tw) ++k;
                ref[same_sign(k) ? k : k + 1] = worst;
            } else if (tw < t_of(0)) {
                if (same_sign(0)) {
                    ref[0] = worst;
                } else {
                    ref.pop_back();
                    ref.insert(ref.begin(), worst);
                }
            } else {
                if (same_sign(last)) {
                    ref[last] = worst;
                } else {
                    ref.erase(ref.begin());
                    ref.push_back(worst);
                }
            }
        }
    }

    // Expand sum_j c_j ((x - mid)/half)^j into monomials of x.
    Vector mono = Vector::Zero(l);
    Vector poly = Vector::Zero(l); // coefficients of ((x - mid)/half)^j
    poly(0) = 1.0;
    for (int j = 0; j < l; ++j) {
        if (j > 0) {
            Vector next = Vector::Zero(l);
            for (int k = 0; k < l; ++k) {
                next(k) += poly(k) * (-mid / half);
                if (k + 1 < l)
                    next(k + 1) += poly(k) / half;
            }
            poly = next;
        }
        mono += best_coef(j) * poly;
    }

    MinimaxFit fit;
    fit.coefficients = mono;
    fit.max_error = best_err;
    fit.iterations = it;
    return fit;
}

double fit_loglog_slope(const std::vector<double>& h, const std::vector<double>& err)
{
    if (h.size() != err.size() || h.size() < 2)
        throw PreconditionError("fit_loglog_slope: need at least two (h, err) pairs");
    const double n = static_cast<double>(h.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double lx = std::log(h[i]);
        const double ly = std::log(err[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double scaled_alpha(WeightFamily family, double alpha0, double h, AlphaScaling scaling)
{
    if (scaling == AlphaScaling::Fixed)
        return alpha0;
    switch (family) {
    case WeightFamily::Exp: return alpha0 / (h * h);
    case WeightFamily::McLain:
    case WeightFamily::Levin: return alpha0 / h;
    default: return alpha0;
    }
}

ConvergenceStudy convergence_study(const ScalarFunction& f, const ConvergenceOptions& opt, const Tolerances& tol)
{
    if (opt.levels < 3)
        throw PreconditionError("convergence_study: need at least 3 refinement levels");
    if (!(opt.b > opt.a) || !(opt.h0 > 0.0))
        throw PreconditionError("convergence_study: empty domain or nonpositive h0");
    const double cells0 = (opt.b - opt.a) / opt.h0;
    if (std::abs(cells0 - std::round(cells0)) > 1e-9 * cells0)
        throw PreconditionError("convergence_study: (b - a)/h0 must be an integer");
    if (opt.family == WeightFamily::Custom)
        throw ConfigError("convergence_study: custom weights are not supported");

    const BasisSpec basis = BasisSpec::monomial(1, opt.l);
    ConvergenceStudy study;
    std::vector<double> fit_h, fit_err;
    for (int level = 0; level < opt.levels; ++level) {
        const int cells = static_cast<int>(std::lround(cells0)) << level;
        const double h = (opt.b - opt.a) / cells;

        ConvergenceLevel L;
        L.h = h;
        L.alpha = scaled_alpha(opt.family, opt.alpha0, h, opt.scaling);
        L.nodes = cells + 1;

        const std::vector<double> xs = uniform_grid(opt.a, opt.b, L.nodes);
        std::vector<double> fs(xs.size());
        std::transform(xs.begin(), xs.end(), fs.begin(), f);
        const PointSet points = PointSet::line(xs, fs);
        WeightSpec weight;
        weight.family = opt.family;
        weight.alpha = L.alpha;

        const std::vector<double> eval = uniform_grid(opt.a, opt.b, cells * opt.eval_per_h + 1);
        const std::vector<double> dense = uniform_grid(opt.a, opt.b, cells * opt.eval_per_h * opt.dense_factor + 1);
        L.minimax_error = discrete_minimax(dense, f, opt.l).max_error;

        double f_scale = 0.0;
        for (double fx : fs)
            f_scale = std::max(f_scale, std::abs(fx));

        for (double x : eval) {
            const MlsSystem sys = MlsSystem::build(points, basis, weight, x);
            double approx = 0.0;
            double amp = 2.0;
            if (auto node = sys.zero_node()) {
                approx = fs[*node];
            } else {
                const Vector a = solve_coefficients(sys, tol);
                approx = a.dot(points.values());
                amp = amplification(a);
            }
            const double err = std::abs(f(x) - approx);
            L.sup_error = std::max(L.sup_error, err);
            L.amplification = std::max(L.amplification, amp);

            const double bound = L.minimax_error * amp;
            const double ratio = bound > 0.0 ? err / bound : (err > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            L.error_bound_ratio = std::max(L.error_bound_ratio, ratio);
            // Near-zero errors on both sides are roundoff, not violations.
            if (err > 1e2 * std::numeric_limits<double>::epsilon() * std::max(1.0, f_scale)) {
                if (ratio > 1.05) ++L.bound_violations;
                else if (ratio > 1.0) ++L.bound_near_violations;
            }
        }

        L.saturated = L.sup_error < 1e2 * std::numeric_limits<double>::epsilon() * std::max(1.0, f_scale);
        if (!L.saturated) {
            fit_h.push_back(h);
            fit_err.push_back(L.sup_error);
        }
        if (fit_h.size() >= 2)
            L.observed_order_cum = fit_loglog_slope(fit_h, fit_err);
        study.levels.push_back(L);
    }

    study.fitted_levels = static_cast<int>(fit_h.size());
    if (fit_h.size() >= 2)
        study.observed_order = fit_loglog_slope(fit_h, fit_err);
    study.exact_reproduction = fit_h.empty();
    study.error_bound_pass = std::none_of(study.levels.begin(), study.levels.end(),
                                          [](const auto& L) { return L.bound_violations > 0; });
    return study;
}

ScalarFunction named_function(std::string_view name)
{
    if (name == "sin") return [](double x) { return std::sin(x); };
    if (name == "cos") return [](double x) { return std::cos(x); };
    if (name == "exp") return [](double x) { return std::exp(x); };
    if (name == "runge") return [](double x) { return 1.0 / (1.0 + 25.0 * x * x); };
    if (name == "linear") return [](double x) { return 1.0 + 2.0 * x; };
    if (name == "quadratic") return [](double x) { return 1.0 - x + 0.5 * x * x; };
    throw ConfigError("unknown test function '" + std::string(name) + "'");
}

} // namespace mls
