#include "mls/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mls/bound1d.hpp"
#include "mls/error_analysis.hpp"
#include "mls/errors.hpp"
#include "mls/instances.hpp"
#include "mls/io.hpp"
#include "mls/spectral.hpp"
#include "mls/system.hpp"

namespace mls {

namespace {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Weighted normal equations in extended precision: minimize
// sum W_i (p(x_i) - f_i)^2, so a = W E (E^t W E)^-1 c.
Vector normal_equations_coefficients(const RandomInstance& inst)
{
    const Matrix E = build_design(inst.points, inst.basis);
    const Vector c = inst.basis.evaluate(inst.x);
    const int m = inst.points.size();
    LVector W(m);
    for (int i = 0; i < m; ++i)
        W(i) = 1.0L / static_cast<long double>(weight_w(inst.weight, (inst.x - inst.points.node(i)).norm()));
    const LMatrix El = E.cast<long double>();
    const LMatrix gram = El.transpose() * W.asDiagonal() * El;
    const LVector y = gram.fullPivLu().solve(c.cast<long double>());
    const LVector a = W.asDiagonal() * (El * y);
    return a.cast<double>();
}

std::vector<WeightFamily> all_families()
{
    return {WeightFamily::Exp, WeightFamily::Shepard, WeightFamily::McLain, WeightFamily::Levin};
}

struct MaxTracker {
    double value = 0.0;
    void operator()(double v) { value = std::max(value, v); }
};

struct MinTracker {
    double value = std::numeric_limits<double>::infinity();
    void operator()(double v) { value = std::min(value, v); }
};

std::string verdict(const std::string& name, bool pass, const std::string& detail)
{
    return name + ": " + (pass ? "PASS" : "FAIL") + " (" + detail + ")";
}

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

} // namespace

SuiteResult run_core_suite(const SelftestOptions& opt)
{
    const Tolerances& tol = opt.tol;
    InstanceOptions io;
    io.families = all_families();
    io.max_dim = 3;
    io.with_values = true;
    InstanceGenerator gen(opt.seed, io);
    std::uniform_real_distribution<double> log_gamma(-3.0, 3.0);

    MaxTracker pu, repro, scale_inv, oracle;
    int pu_fail = 0, repro_fail = 0, scale_fail = 0, oracle_fail = 0, oracle_checked = 0;
    for (int n = 0; n < opt.instances; ++n) {
        const RandomInstance inst = gen.next();
        const MlsSystem sys = MlsSystem::build(inst.points, inst.basis, inst.weight, inst.x);
        const Vector a = solve_coefficients(sys, tol);

        const double e1 = std::abs(a.sum() - 1.0);
        pu(e1);
        pu_fail += !(e1 <= tol.lin);

        const double e2 = (sys.E().transpose() * a - sys.c()).norm() / sys.c().norm();
        repro(e2);
        repro_fail += !(e2 <= tol.lin);

        const double gamma = std::pow(10.0, log_gamma(gen.engine()));
        const Vector ag = solve_coefficients(sys.scaled(gamma), tol);
        const double e3 = (ag - a).norm() / a.norm();
        scale_inv(e3);
        scale_fail += !(e3 <= tol.scale_invariance);

        if (inst.points.size() <= 8 && inst.basis.size() <= 4) {
            ++oracle_checked;
            const Vector ao = normal_equations_coefficients(inst);
            const double e4 = (a - ao).norm() / ao.norm();
            oracle(e4);
            oracle_fail += !(e4 <= tol.oracle);
        }
    }

    // I-5 on Shepard instances: evaluation at every node is the node value.
    InstanceOptions so = io;
    so.families = {WeightFamily::Shepard};
    InstanceGenerator shep(opt.seed ^ 0x5eedULL, so);
    int interp_fail = 0, interp_checked = 0;
    for (int n = 0; n < opt.instances; ++n) {
        const RandomInstance inst = shep.next();
        for (int i = 0; i < inst.points.size(); ++i) {
            ++interp_checked;
            const double v = evaluate(inst.points, inst.basis, inst.weight, inst.points.node(i), tol);
            interp_fail += v != inst.points.values()(i);
        }
    }

    SuiteResult r;
    r.name = "core";
    r.instances = opt.instances;
    r.pass = pu_fail == 0 && repro_fail == 0 && scale_fail == 0 && oracle_fail == 0 && interp_fail == 0 &&
             oracle_checked > 0;
    r.details = {
        {"I-1_partition_of_unity", {{"max", pu.value}, {"failures", pu_fail}, {"tolerance", tol.lin}}},
        {"I-2_reproduction", {{"max", repro.value}, {"failures", repro_fail}, {"tolerance", tol.lin}}},
        {"I-3_scale_invariance",
         {{"max", scale_inv.value}, {"failures", scale_fail}, {"tolerance", tol.scale_invariance}}},
        {"I-4_oracle",
         {{"max", oracle.value}, {"failures", oracle_fail}, {"checked", oracle_checked}, {"tolerance", tol.oracle}}},
        {"I-5_interpolation", {{"failures", interp_fail}, {"checked", interp_checked}}},
        {"rejected_instances", gen.rejected()},
    };
    r.summary = verdict("core", r.pass,
                        "pu " + fmt(pu.value) + ", repro " + fmt(repro.value) + ", scale " + fmt(scale_inv.value) +
                            ", oracle " + fmt(oracle.value) + ", interp failures " + std::to_string(interp_fail));
    return r;
}

SuiteResult run_spectral_suite(const SelftestOptions& opt)
{
    const Tolerances& tol = opt.tol;
    InstanceOptions io;
    io.families = all_families();
    io.max_dim = 3;
    InstanceGenerator gen(opt.seed, io);

    MaxTracker sym, eig_dev, trace_dev, idem;
    MinTracker psd_margin, norm_slack;
    int sym_fail = 0, eig_fail = 0, trace_fail = 0, psd_fail = 0, norm_fail = 0, idem_fail = 0;
    for (int n = 0; n < opt.instances; ++n) {
        const RandomInstance inst = gen.next();
        const MlsSystem sys = MlsSystem::build(inst.points, inst.basis, inst.weight, inst.x);
        const SpectralReport rep = diagnose(sys, tol);

        sym(std::max(rep.symmetry.a1_dinv, rep.symmetry.a2_dinv));
        sym_fail += !rep.symmetry.pass;
        eig_dev(rep.eigen.max_deviation);
        eig_fail += !rep.eigen.pass;
        const double td = std::abs(rep.eigen.trace_a1 - sys.l());
        trace_dev(td);
        trace_fail += !(td <= tol.eig_cluster * sys.m());
        psd_margin(std::min(rep.psd.a1_dinv_min, rep.psd.minus_a2_dinv_min) / rep.psd.scale);
        psd_fail += !rep.psd.pass;
        for (const auto& c : rep.norms.standard)
            norm_slack(c.slack() / std::max({std::abs(c.lhs), std::abs(c.rhs), std::numeric_limits<double>::min()}));
        norm_fail += !rep.norms.pass;
        idem(rep.idempotence);
        idem_fail += !rep.idempotence_pass;
    }

    // Generic singular value inequalities, 200 pairs per shape class.
    std::mt19937_64& rng = gen.engine();
    std::uniform_int_distribution<int> dim(1, 6);
    const char* classes[] = {"square", "tall_U", "wide_V", "tall_U_wide_V", "wide_U_tall_V"};
    Json sv_json;
    int sv_fail = 0;
    MinTracker sv_slack;
    for (int cls = 0; cls < 5; ++cls) {
        int fails = 0;
        for (int n = 0; n < opt.instances; ++n) {
            int d2 = dim(rng);
            int d1 = d2, d4 = d2;
            switch (cls) {
            case 1: d1 = d2 + dim(rng); break;
            case 2: d4 = d2 + dim(rng); break;
            case 3: d1 = d2 + dim(rng); d4 = d2 + dim(rng); break;
            case 4: d2 = std::max(2, d2); d1 = std::max(1, d2 - dim(rng) % d2); d4 = d1; break;
            default: break;
            }
            Matrix U = random_gaussian(d1, d2, rng);
            if (cls == 0 && n % 2 == 1)
                U = 0.5 * (U + U.transpose()).eval();
            const Matrix V = random_gaussian(d2, d4, rng);
            const SvInequalityReport rep = check_sv_inequalities(U, V, tol);
            fails += !rep.pass;
            for (const auto& c : rep.checks)
                if (c.kind == InequalityCheck::Kind::LessEqual)
                    sv_slack(c.slack() / std::max({std::abs(c.lhs), std::abs(c.rhs), std::numeric_limits<double>::min()}));
        }
        sv_json[classes[cls]] = {{"pairs", opt.instances}, {"failures", fails}};
        sv_fail += fails;
    }

    // Lu-Pearce sandwiches over random symmetric pairs with one PSD factor.
    std::normal_distribution<double> normal(0.0, 1.0);
    int lp_fail = 0, lp_regime2 = 0, lp_corollary = 0;
    MinTracker lp_slack;
    for (int n = 0; n < opt.instances; ++n) {
        const int m = dim(rng);
        const int kind = n % 3;
        Vector eu(m), ev(m);
        for (int i = 0; i < m; ++i) {
            eu(i) = normal(rng);
            ev(i) = normal(rng);
        }
        if (kind == 0) { // both PD
            eu = eu.cwiseAbs().array() + 0.05;
            ev = ev.cwiseAbs().array() + 0.05;
        } else if (kind == 1) { // U PSD with a zero block, V indefinite
            eu = eu.cwiseAbs();
            for (int i = 0; i < m; i += 2)
                eu(i) = 0.0;
        } else { // U indefinite with zeros, V PSD
            ev = ev.cwiseAbs();
            if (m > 1)
                eu(m - 1) = 0.0;
        }
        const Matrix U = random_symmetric(eu, rng);
        const Matrix V = random_symmetric(ev, rng);
        const LuPearceReport rep = check_lu_pearce(U, V, tol);
        lp_fail += !rep.pass;
        lp_corollary += rep.corollary_applicable;
        lp_regime2 += rep.zero > 0;
        for (const auto& c : rep.checks)
            if (c.kind == InequalityCheck::Kind::LessEqual)
                lp_slack(c.slack() / std::max(c.tolerance / tol.norm, std::numeric_limits<double>::min()));
    }

    SuiteResult r;
    r.name = "spectral";
    r.instances = opt.instances;
    r.pass = sym_fail == 0 && eig_fail == 0 && trace_fail == 0 && psd_fail == 0 && norm_fail == 0 &&
             idem_fail == 0 && sv_fail == 0 && lp_fail == 0;
    r.details = {
        {"S-1_eigen_clusters", {{"max_deviation", eig_dev.value}, {"failures", eig_fail}}},
        {"S-2_trace", {{"max_deviation", trace_dev.value}, {"failures", trace_fail}}},
        {"S-3_symmetry", {{"max_residual", sym.value}, {"failures", sym_fail}}},
        {"S-4_psd", {{"min_relative_margin", psd_margin.value}, {"failures", psd_fail}}},
        {"S-4_norm_bounds", {{"min_relative_slack", norm_slack.value}, {"failures", norm_fail}}},
        {"S-4_sv_inequalities", {{"classes", sv_json}, {"min_relative_slack", sv_slack.value}, {"failures", sv_fail}}},
        {"S-4_lu_pearce",
         {{"pairs", opt.instances},
          {"failures", lp_fail},
          {"min_relative_slack", lp_slack.value},
          {"with_zero_eigenvalues", lp_regime2},
          {"corollary_pairs", lp_corollary}}},
        {"S-5_idempotence", {{"max_residual", idem.value}, {"failures", idem_fail}}},
        {"rejected_instances", gen.rejected()},
    };
    r.summary = verdict("spectral", r.pass,
                        "sym " + fmt(sym.value) + ", eig dev " + fmt(eig_dev.value) + ", psd margin " +
                            fmt(psd_margin.value) + ", sv failures " + std::to_string(sv_fail) +
                            ", lu-pearce failures " + std::to_string(lp_fail));
    return r;
}

SuiteResult run_bound_suite(const SelftestOptions& opt)
{
    const Tolerances& tol = opt.tol;
    InstanceOptions io;
    io.min_m = 3;
    io.sort_nodes = true;
    InstanceGenerator gen(opt.seed, io);
    const std::vector<double> steps{1e-3, 1e-4, 1e-5};

    int fd_counted = 0, fd_floor_limited = 0, fd_fail = 0;
    MinTracker slope_min, cert_slack;
    MaxTracker slope_max, h_excess;
    int cert_fail = 0, majorant_fail = 0, h_fail = 0, certified = 0;
    Json slopes = Json::array();
    while (certified < opt.bound_instances) {
        const RandomInstance inst = gen.next();
        if (inst.basis.size() >= inst.points.size())
            continue; // A2 = 0 and a(x) is a polynomial; nothing to certify about the ODE
        const double x = inst.x(0);

        const OdeFdStudy fd = ode_fd_study(inst.points, inst.basis, inst.weight, x, steps, tol);
        if (fd.slope) {
            ++fd_counted;
            slope_min(*fd.slope);
            slope_max(*fd.slope);
            slopes.push_back(*fd.slope);
            fd_fail += !(std::abs(*fd.slope - 2.0) <= tol.fd_ode);
        } else {
            ++fd_floor_limited;
        }

        const int m = inst.points.size();
        const double x1 = inst.points.nodes()(0, 0);
        const double xm = inst.points.nodes()(m - 1, 0);
        const std::vector<double> grid = uniform_grid(x1, xm, opt.bound_grid);
        const BoundCertificate cert =
            certify_bound(inst.points, inst.basis, inst.weight, grid, Convention::Standard, tol);
        cert_fail += !cert.pass;
        majorant_fail += !cert.majorants_pass;
        cert_slack(cert.min_slack);

        for (double g : grid) {
            const Vector h = build_H(g, inst.points, inst.weight.alpha);
            const double hn = h.cwiseAbs().maxCoeff();
            const double bound = 2.0 * inst.weight.alpha * (xm - x1);
            h_excess(hn - bound);
            h_fail += hn > bound * (1.0 + 1e-15);
        }
        ++certified;
    }

    int dbar_fail = 0;
    MaxTracker dbar_err;
    for (int l = 1; l <= 8; ++l) {
        Vector s = build_dbar(l).singular_values();
        std::sort(s.data(), s.data() + s.size());
        for (int i = 0; i < l; ++i) {
            const double e = std::abs(s(i) - i);
            dbar_err(e);
            dbar_fail += e > 1e-12;
        }
    }

    SuiteResult r;
    r.name = "bound";
    r.instances = certified;
    r.pass = fd_fail == 0 && fd_counted >= opt.bound_instances / 2 && cert_fail == 0 && majorant_fail == 0 &&
             h_fail == 0 && dbar_fail == 0;
    r.details = {
        {"B-1_ode_fd",
         {{"counted", fd_counted},
          {"floor_limited", fd_floor_limited},
          {"failures", fd_fail},
          {"min_slope", fd_counted ? Json(slope_min.value) : Json(nullptr)},
          {"max_slope", fd_counted ? Json(slope_max.value) : Json(nullptr)},
          {"slopes", slopes},
          {"tolerance", tol.fd_ode}}},
        {"B-2_majorants", {{"failures", majorant_fail}}},
        {"B-3_certificate", {{"failures", cert_fail}, {"min_slack", cert_slack.value}, {"grid", opt.bound_grid}}},
        {"B-4_dbar", {{"max_error", dbar_err.value}, {"failures", dbar_fail}}},
        {"B-5_H_norm", {{"max_excess", h_excess.value}, {"failures", h_fail}}},
    };
    r.summary = verdict("bound", r.pass,
                        "fd slope [" + fmt(slope_min.value) + ", " + fmt(slope_max.value) + "], certificate failures " +
                            std::to_string(cert_fail) + ", majorant failures " + std::to_string(majorant_fail));
    return r;
}

SuiteResult run_error_suite(const SelftestOptions& opt)
{
    const Tolerances& tol = opt.tol;

    ConvergenceOptions co; // sin on [0, 3], l = 2, h = 0.2, 0.1, 0.05, alpha = 1/h^2
    const ConvergenceStudy sin_study = convergence_study(named_function("sin"), co, tol);
    const bool order_ok = sin_study.observed_order && *sin_study.observed_order >= 1.8;

    // E-3: observed order non-decreasing in l for each smooth test function.
    // Endpoints must not be stationary points of f: with l = 1 the O(h)
    // boundary error is proportional to f' there, and runge on [0, 3]
    // (f'(0) = 0, f'(3) ~ 0) shows a spurious second order.
    struct BatteryCase {
        const char* name;
        double a, b, h0;
    };
    const BatteryCase cases[] = {{"sin", 0.0, 3.0, 0.2}, {"exp", 0.0, 3.0, 0.2}, {"runge", 0.2, 1.2, 0.1}};
    Json battery;
    bool monotone = true;
    bool bound_ok = sin_study.error_bound_pass;
    for (const BatteryCase& bc : cases) {
        const char* name = bc.name;
        Json orders = Json::array();
        double previous = -std::numeric_limits<double>::infinity();
        for (int l = 1; l <= 3; ++l) {
            ConvergenceOptions o = co;
            o.a = bc.a;
            o.b = bc.b;
            o.h0 = bc.h0;
            o.l = l;
            const ConvergenceStudy s = convergence_study(named_function(name), o, tol);
            const double order = s.observed_order.value_or(std::numeric_limits<double>::infinity());
            orders.push_back(s.observed_order ? Json(order) : Json(nullptr));
            monotone = monotone && order >= previous;
            previous = order;
            bound_ok = bound_ok && s.error_bound_pass;
        }
        battery[name] = orders;
    }

    // E-2: sum |a_i| >= 1 on random instances.
    InstanceOptions io;
    io.families = all_families();
    io.max_dim = 3;
    InstanceGenerator gen(opt.seed, io);
    MinTracker amp_min;
    int amp_fail = 0;
    for (int n = 0; n < opt.instances; ++n) {
        const RandomInstance inst = gen.next();
        const double amp = amplification(solve_coefficients(MlsSystem::build(inst.points, inst.basis, inst.weight, inst.x), tol));
        amp_min(amp);
        amp_fail += !(amp >= 2.0 - tol.lin);
    }

    SuiteResult r;
    r.name = "error";
    r.instances = opt.instances;
    r.pass = order_ok && bound_ok && monotone && amp_fail == 0;
    r.details = {
        {"sin_study", to_json(sin_study)},
        {"observed_order_floor", 1.8},
        {"E-1_error_bound", {{"pass", bound_ok}}},
        {"E-2_amplification", {{"min", amp_min.value}, {"failures", amp_fail}}},
        {"E-3_order_by_l", {{"orders", battery}, {"monotone", monotone}}},
    };
    r.summary = verdict("error", r.pass,
                        "sin order " + (sin_study.observed_order ? fmt(*sin_study.observed_order) : std::string("n/a")) +
                            ", min amplification " + fmt(amp_min.value) + ", monotone " + (monotone ? "yes" : "no"));
    return r;
}

std::vector<SuiteResult> run_selftest(const SelftestOptions& opt)
{
    return {run_core_suite(opt), run_spectral_suite(opt), run_bound_suite(opt), run_error_suite(opt)};
}

nlohmann::json selftest_json(const SelftestOptions& opt, const std::vector<SuiteResult>& results)
{
    Json suites;
    bool pass = true;
    for (const auto& r : results) {
        suites[r.name] = {{"pass", r.pass}, {"instances", r.instances}, {"details", r.details}, {"summary", r.summary}};
        pass = pass && r.pass;
    }
    return {{"seed", opt.seed},
            {"instances_per_suite", opt.instances},
            {"tolerances", to_json(opt.tol)},
            {"suites", suites},
            {"pass", pass}};
}

} // namespace mls
