// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Seed 42 throughout; instance draws are independent of the
// selftest streams where an oracle is involved.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "mls/bound1d.hpp"
#include "mls/error_analysis.hpp"
#include "mls/instances.hpp"
#include "mls/spectral.hpp"
#include "mls/system.hpp"
#include "oracle.hpp"

using namespace mls;

namespace {

constexpr std::uint64_t kSeed = 42;
constexpr int kInstances = 200;

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail)
{
    failures += !pass;
    std::printf("criterion %2d: %s  %s [%s]\n", id, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

struct Worst {
    double value = -std::numeric_limits<double>::infinity();
    void operator()(double v) { value = std::max(value, v); }
};

InstanceOptions spectral_options()
{
    InstanceOptions o;
    o.families = {WeightFamily::Exp, WeightFamily::Shepard, WeightFamily::McLain, WeightFamily::Levin};
    o.max_dim = 2;
    o.max_gram_condition = 1e8;
    return o;
}

// Runs `body` on the operator bundle of kInstances generated instances.
void for_each_bundle(const std::function<void(const MlsSystem&, const OperatorBundle&)>& body)
{
    InstanceGenerator gen(kSeed, spectral_options());
    for (int n = 0; n < kInstances; ++n) {
        const RandomInstance in = gen.next();
        const MlsSystem sys = MlsSystem::build(in.points, in.basis, in.weight, in.x);
        body(sys, build_operators(sys));
    }
}

void criterion_1()
{
    Worst worst;
    int bad = 0;
    for_each_bundle([&](const MlsSystem& sys, const OperatorBundle& b) {
        const SymmetryResult r = check_symmetry(b);
        worst(std::max(r.a1_dinv, r.a2_dinv));
        bad += !(r.a1_dinv <= 1e-10 && r.a2_dinv <= 1e-10 && sys.gram_condition() <= 1e8);
    });
    report(1, bad == 0, "A1 D^-1, A2 D^-1 symmetric to 1e-10 relative",
           std::to_string(kInstances) + " instances, max residual " + fmt(worst.value) + ", failures " +
               std::to_string(bad));
}

void criterion_2()
{
    Worst worst;
    int bad = 0;
    for_each_bundle([&](const MlsSystem&, const OperatorBundle& b) {
        const EigenResult r = eigen_structure(b);
        const int m = b.m(), l = b.l();
        const bool counts = r.a1_one.count == l && r.a1_zero.count == m - l && r.a2_zero.count == l &&
                            r.a2_minus_one.count == m - l;
        worst(r.max_deviation);
        bad += !(counts && !r.structural_failure && r.max_deviation <= 1e-8);
    });
    report(2, bad == 0, "eig(A1) = {1^l, 0^(m-l)}, eig(A2) = {0^l, -1^(m-l)} to 1e-8",
           "max deviation " + fmt(worst.value) + ", failures " + std::to_string(bad));
}

void criterion_3()
{
    Worst margin, excess;
    int bad = 0;
    for_each_bundle([&](const MlsSystem&, const OperatorBundle& b) {
        const Vector dinv = b.d.cwiseInverse();
        const double scale = dinv.maxCoeff(); // ||D^-1||_2
        const Vector e1 = symmetric_eigenvalues(b.A1Dinv);
        const Vector e2 = symmetric_eigenvalues(-b.A2Dinv);
        const double lambda_max = e1.maxCoeff();
        const double bound = 1.0 / b.d.minCoeff();
        margin(-std::min(e1.minCoeff(), e2.minCoeff()) / scale);
        excess((lambda_max - bound) / scale);
        bad += !(e1.minCoeff() >= -1e-10 * scale && e2.minCoeff() >= -1e-10 * scale &&
                 lambda_max <= bound + 1e-12 * scale);
    });
    report(3, bad == 0, "A1 D^-1, -A2 D^-1 PSD; lambda_max(A1 D^-1) <= 1/lambda_min(D)",
           "worst negative margin " + fmt(margin.value) + " ||D^-1||, worst excess " + fmt(excess.value) +
               ", failures " + std::to_string(bad));
}

void criterion_4()
{
    int bad = 0;
    Worst worst;
    for_each_bundle([&](const MlsSystem&, const OperatorBundle& b) {
        const double s_a1 = sigma_max(b.A1);
        const double s_d = b.d.maxCoeff(), s_dmin = b.d.minCoeff();
        const double s_a1dinv = sigma_max(b.A1Dinv);
        const double kappa = s_d / s_dmin;
        const double min_dinv = 1.0 / s_d;
        bool ok = s_a1 >= 1.0 - 1e-10;
        ok = ok && s_a1 <= kappa + 1e-10 * std::max(s_a1, kappa);
        const double sc = std::max(s_a1 * min_dinv, s_a1dinv);
        ok = ok && s_a1 * min_dinv <= s_a1dinv + 1e-12 * sc;
        ok = ok && s_a1dinv <= 1.0 / s_dmin + 1e-12 * std::max(s_a1dinv, 1.0 / s_dmin);
        worst((s_a1 * min_dinv - s_a1dinv) / sc);
        bad += !ok;
        // the library's certified checks must agree
        bad += !check_norm_bounds(b).pass;
    });
    report(4, bad == 0, "norm bounds on A1 and A1 D^-1 (standard convention)",
           "failures " + std::to_string(bad) + ", tightest relative slack of sigma_max(A1) sigma_min(D^-1) bound " +
               fmt(-worst.value));
}

// Descending real parts of eig(VU) from the general dense solver.
std::vector<double> dense_eigs(const Matrix& M)
{
    Eigen::EigenSolver<Matrix> es(M, false);
    std::vector<double> out;
    for (auto z : es.eigenvalues()) out.push_back(z.real());
    std::sort(out.rbegin(), out.rend());
    return out;
}

void criterion_5()
{
    std::mt19937_64 rng(kSeed);
    std::normal_distribution<double> nd;
    std::uniform_int_distribution<int> size(1, 6);
    int violations = 0, oracle_mismatch = 0, corollary = 0;
    for (int n = 0; n < kInstances; ++n) {
        const int m = size(rng);
        Vector eu(m), ev(m);
        for (int i = 0; i < m; ++i) {
            eu(i) = nd(rng);
            ev(i) = nd(rng);
        }
        switch (n % 4) {
        case 0: // both positive definite
            eu = eu.cwiseAbs().array() + 0.05;
            ev = ev.cwiseAbs().array() + 0.05;
            break;
        case 1: // V PSD and singular, U indefinite
            ev = ev.cwiseAbs();
            ev(0) = 0.0;
            break;
        case 2: // U PSD and singular, V indefinite
            eu = eu.cwiseAbs();
            eu(m - 1) = 0.0;
            break;
        default: // U positive definite, V indefinite
            eu = eu.cwiseAbs().array() + 0.05;
            break;
        }
        const Matrix U = random_symmetric(eu, rng), V = random_symmetric(ev, rng);
        const LuPearceReport r = check_lu_pearce(U, V);
        corollary += r.corollary_applicable;
        for (const auto& c : r.checks) violations += !c.pass;
        const std::vector<double> oracle = dense_eigs(V * U);
        const double scale = std::max(1.0, sigma_max(U) * sigma_max(V));
        for (int k = 0; k < m; ++k)
            oracle_mismatch += std::abs(r.product_eigenvalues(k) - oracle[static_cast<std::size_t>(k)]) > 1e-12 * scale;
    }
    report(5, violations == 0 && oracle_mismatch == 0, "eigenvalue sandwiches for VU, corollary for PD pairs",
           std::to_string(kInstances) + " pairs (" + std::to_string(corollary) + " PD), violations " +
               std::to_string(violations) + ", dense-oracle mismatches " + std::to_string(oracle_mismatch));
}

InstanceGenerator h2_generator()
{
    InstanceOptions o;
    o.min_m = 3;
    o.sort_nodes = true;
    return InstanceGenerator(kSeed, o);
}

void criterion_6()
{
    InstanceGenerator gen = h2_generator();
    const std::vector<double> steps{1e-3, 1e-4, 1e-5};
    int counted = 0, floor_limited = 0, bad = 0, drawn = 0;
    double lo = INFINITY, hi = -INFINITY;
    while (counted < 20 && drawn < 400) {
        const RandomInstance in = gen.next();
        ++drawn;
        if (in.basis.size() >= in.points.size()) continue; // a(x) polynomial, A2 = 0
        const OdeFdStudy st = ode_fd_study(in.points, in.basis, in.weight, in.x(0), steps);
        if (!st.slope) {
            ++floor_limited;
            continue;
        }
        ++counted;
        lo = std::min(lo, *st.slope);
        hi = std::max(hi, *st.slope);
        bad += !(std::abs(*st.slope - 2.0) <= 0.3);
    }
    report(6, counted >= 20 && bad == 0, "central FD of a(x) matches the ODE right-hand side, slope 2 +- 0.3",
           std::to_string(counted) + " instances, slopes [" + fmt(lo) + ", " + fmt(hi) + "], floor-limited " +
               std::to_string(floor_limited) + ", failures " + std::to_string(bad));
}

void criterion_7()
{
    InstanceGenerator gen = h2_generator();
    int certified = 0, bad = 0, majorant_bad = 0;
    double min_slack = INFINITY;
    while (certified < 20) {
        const RandomInstance in = gen.next();
        if (in.basis.size() >= in.points.size()) continue;
        const int m = in.points.size();
        const auto grid = uniform_grid(in.points.nodes()(0, 0), in.points.nodes()(m - 1, 0), 200);
        const BoundCertificate c = certify_bound(in.points, in.basis, in.weight, grid, Convention::Standard);
        ++certified;
        for (const auto& p : c.points) {
            min_slack = std::min(min_slack, p.slack);
            bad += !(p.slack >= -1e-9);
            majorant_bad += !(p.a2h_norm <= c.constants.M2 && p.a0dc_norm <= c.constants.M1);
        }
    }
    report(7, bad == 0 && majorant_bad == 0, "||a(x)|| certificate and pointwise majorants on 200-point grids",
           std::to_string(certified) + " instances, min slack " + fmt(min_slack) + ", bound failures " +
               std::to_string(bad) + ", majorant failures " + std::to_string(majorant_bad));
}

void criterion_8()
{
    double worst = 0.0;
    for (int l = 1; l <= 8; ++l) {
        const Vector s = build_dbar(l).singular_values();
        for (int i = 0; i < l; ++i) worst = std::max(worst, std::abs(s(i) - (l - 1 - i)));
    }
    report(8, worst <= 1e-12, "singular values of the differentiation matrix are 0..l-1, l = 1..8",
           "max error " + fmt(worst));
}

void criterion_9()
{
    InstanceOptions o = spectral_options();
    o.max_dim = 3;
    InstanceGenerator gen(kSeed, o);
    std::uniform_real_distribution<double> log_gamma(-3.0, 3.0);
    std::normal_distribution<double> nd;
    Worst pu, repro, scale, oracle;
    int bad = 0;
    for (int n = 0; n < kInstances; ++n) {
        const RandomInstance in = gen.next();
        const MlsSystem sys = MlsSystem::build(in.points, in.basis, in.weight, in.x);
        const Vector a = solve_coefficients(sys);

        const double e_pu = std::abs(a.sum() - 1.0);
        // f = sum beta_j p_j sampled at the nodes, compared with f(x)
        Vector beta(in.basis.size());
        for (auto& b : beta) b = nd(gen.engine());
        const Vector fx = sys.E() * beta;
        const double exact = sys.c().dot(beta);
        const double e_rep = std::abs(a.dot(fx) - exact) / std::max({1.0, std::abs(exact), fx.cwiseAbs().maxCoeff()});
        const double gamma = std::pow(10.0, log_gamma(gen.engine()));
        const double e_sc = (solve_coefficients(sys.scaled(gamma)) - a).norm() / a.norm();
        const Vector ao = test_oracle::coefficients(in.points, in.basis, in.weight, in.x);
        const double e_or = (a - ao).norm() / ao.norm();
        pu(e_pu);
        repro(e_rep);
        scale(e_sc);
        oracle(e_or);
        bad += !(e_pu <= 1e-9 && e_rep <= 1e-9 && e_sc <= 1e-10 && e_or <= 1e-8);
    }

    InstanceOptions so = o;
    so.families = {WeightFamily::Shepard};
    so.with_values = true;
    InstanceGenerator shep(kSeed + 1, so);
    int interp_bad = 0, nodes = 0;
    for (int n = 0; n < kInstances; ++n) {
        const RandomInstance in = shep.next();
        for (int i = 0; i < in.points.size(); ++i, ++nodes)
            interp_bad += evaluate(in.points, in.basis, in.weight, in.points.node(i)) != in.points.values()(i);
    }
    report(9, bad == 0 && interp_bad == 0, "partition of unity, reproduction, D-scaling, oracle, Shepard interpolation",
           "max errors " + fmt(pu.value) + " / " + fmt(repro.value) + " / " + fmt(scale.value) + " / " +
               fmt(oracle.value) + ", failures " + std::to_string(bad) + ", interpolation misses " +
               std::to_string(interp_bad) + " of " + std::to_string(nodes) + " nodes");
}

void criterion_10()
{
    ConvergenceOptions o;
    o.a = 0.0;
    o.b = 3.0;
    o.h0 = 0.2;
    o.levels = 3;
    o.l = 2;
    o.family = WeightFamily::Exp;
    o.scaling = AlphaScaling::InverseSquareH;
    const ConvergenceStudy s = convergence_study(named_function("sin"), o);
    const bool ok = s.observed_order && *s.observed_order >= 1.8;
    std::string errs;
    for (const auto& lv : s.levels) errs += (errs.empty() ? "" : ", ") + fmt(lv.sup_error);
    report(10, ok, "sin on [0, 3], l = 2, h = 0.2/0.1/0.05: observed order >= 1.8",
           "order " + (s.observed_order ? fmt(*s.observed_order) : std::string("n/a")) + ", sup errors " + errs);
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void criterion_11()
{
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = dir / "mls_acceptance_run1.json";
    const auto b = dir / "mls_acceptance_run2.json";
    auto run = [](const std::filesystem::path& out) {
        const std::string cmd = std::string("\"") + MLS_CLI_PATH + "\" selftest --seed 42 --out \"" + out.string() +
                                "\" 2>/dev/null";
        return std::system(cmd.c_str());
    };
    const int rc1 = run(a), rc2 = run(b);
    const std::string s1 = slurp(a), s2 = slurp(b);
    const bool ok = rc1 == 0 && rc2 == 0 && !s1.empty() && s1 == s2;
    report(11, ok, "selftest --seed 42 twice gives byte-identical JSON",
           "exit codes " + std::to_string(rc1) + "/" + std::to_string(rc2) + ", " + std::to_string(s1.size()) +
               " bytes, " + (s1 == s2 ? "identical" : "different"));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

} // namespace

int main()
{
    const std::function<void()> criteria[] = {criterion_1, criterion_2, criterion_3, criterion_4,
                                              criterion_5, criterion_6, criterion_7, criterion_8,
                                              criterion_9, criterion_10, criterion_11};
    int id = 0;
    for (const auto& c : criteria) {
        ++id;
        try {
            c();
        } catch (const std::exception& e) {
            report(id, false, "aborted", e.what());
        }
    }
    std::printf("%d of 11 criteria passed\n", 11 - failures);
    return failures == 0 ? 0 : 1;
}
