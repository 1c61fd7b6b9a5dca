// mls: moving least-squares fitting and certification front end.
//
//   mls fit       --input nodes.csv [--config cfg.json] [--grid N|a:b:N] [--out PATH] [--format csv|json]
//   mls diagnose  [--input nodes.csv] [--config cfg.json] [--grid ...|--at X[,Y,Z]] [--seed U64]
//   mls bound     --input nodes.csv [--config cfg.json] [--grid ...] [--convention standard|paper]
//   mls converge  [--config cfg.json] [--function sin] [--domain 0:3] [--h0 0.2] [--levels 3]
//   mls selftest  [--seed U64] [--instances N]
//
// Exit codes: 0 ok, 1 usage, 2 malformed input, 3 hypothesis failure,
// 4 conditioning failure, 5 certified inequality violated.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mls/bound1d.hpp"
#include "mls/error_analysis.hpp"
#include "mls/errors.hpp"
#include "mls/io.hpp"
#include "mls/selftest.hpp"
#include "mls/spectral.hpp"
#include "mls/system.hpp"

namespace {

using namespace mls;

struct RunConfig {
    std::string input;
    std::string config;
    std::string grid;
    std::string at;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format;
    std::string convention = "standard";
    std::vector<std::string> tol_overrides;

    // converge
    std::string function = "sin";
    std::string domain = "0:3";
    double h0 = 0.2;
    int levels = 3;
    double alpha0 = 1.0;
    bool fixed_alpha = false;

    // selftest
    int instances = 200;
};

std::uint64_t resolve_seed(const RunConfig& cfg)
{
    if (cfg.seed)
        return *cfg.seed;
    if (const char* env = std::getenv("MLS_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size())
                return v;
        } catch (const std::exception&) {
        }
        throw InputError(std::string("MLS_SEED is not an unsigned integer: ") + env);
    }
    return 42;
}

Tolerances resolve_tolerances(const RunConfig& cfg)
{
    Tolerances tol;
    for (const auto& kv : cfg.tol_overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw InputError("--tol expects KEY=VAL, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        double value = 0.0;
        try {
            value = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw InputError("--tol value for '" + key + "' is not a number");
        }
        if (!tol.set(key, value))
            throw InputError("unknown tolerance key '" + key + "'");
    }
    return tol;
}

ModelConfig resolve_model(const RunConfig& cfg)
{
    return cfg.config.empty() ? ModelConfig{} : read_model_config(cfg.config);
}

std::vector<double> split_numbers(const std::string& s, char sep)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(part, &used));
            if (used != part.size())
                throw InputError("bad number '" + part + "'");
        } catch (const std::invalid_argument&) {
            throw InputError("bad number '" + part + "'");
        }
    }
    return out;
}

// "N" spans the node bounding box; "a:b:N" gives the range per axis.
// For d > 1 the grid is the tensor product of the per-axis grids.
std::vector<Vector> resolve_grid(const RunConfig& cfg, const PointSet& points, int default_n)
{
    const int d = points.dim();
    if (!cfg.at.empty()) {
        const auto coords = split_numbers(cfg.at, ',');
        if (static_cast<int>(coords.size()) != d)
            throw InputError("--at needs " + std::to_string(d) + " coordinates");
        return {Eigen::Map<const Vector>(coords.data(), d)};
    }

    Vector lo = points.nodes().colwise().minCoeff().transpose();
    Vector hi = points.nodes().colwise().maxCoeff().transpose();
    int n = default_n;
    if (!cfg.grid.empty()) {
        const auto parts = split_numbers(cfg.grid, ':');
        if (parts.size() == 1) {
            n = static_cast<int>(parts[0]);
        } else if (parts.size() == 3) {
            lo.setConstant(parts[0]);
            hi.setConstant(parts[1]);
            n = static_cast<int>(parts[2]);
        } else {
            throw InputError("--grid expects N or a:b:N");
        }
        if (n < 1)
            throw InputError("--grid needs at least one point");
    }

    std::vector<std::vector<double>> axes;
    for (int k = 0; k < d; ++k)
        axes.push_back(uniform_grid(lo(k), hi(k), n));
    std::vector<Vector> grid;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (;;) {
        Vector p(d);
        for (int k = 0; k < d; ++k)
            p(k) = axes[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
        grid.push_back(p);
        int k = 0;
        while (k < d && ++idx[static_cast<std::size_t>(k)] == n)
            idx[static_cast<std::size_t>(k++)] = 0;
        if (k == d)
            break;
    }
    return grid;
}

void emit(const RunConfig& cfg, const std::string& content)
{
    if (cfg.out.empty())
        std::cout << content;
    else
        write_atomic(cfg.out, content);
}

int report_hypotheses(const HypothesisReport& hyp)
{
    if (auto failed = hyp.first_failure()) {
        std::cerr << "hypothesis " << *failed << " fails (m=" << hyp.m << ", l=" << hyp.l << ", rank=" << hyp.rank
                  << ")\n";
        return exit_code::hypothesis;
    }
    return exit_code::ok;
}

int cmd_fit(const RunConfig& cfg)
{
    if (cfg.input.empty())
        throw InputError("fit needs --input");
    const PointSet points = read_points_csv(cfg.input, true);
    const ModelConfig model = resolve_model(cfg);
    const BasisSpec basis = BasisSpec::monomial(points.dim(), model.l);
    const Tolerances tol = resolve_tolerances(cfg);
    if (int rc = report_hypotheses(check_hypotheses(points, basis, model.weight)))
        return rc;

    const auto grid = resolve_grid(cfg, points, 101);
    const int d = points.dim();
    std::ostringstream csv;
    for (int k = 0; k < d; ++k)
        csv << 'x' << k + 1 << ',';
    csv << "Lhat,sum_a,amplification\n";
    Json rows = Json::array();
    for (const Vector& x : grid) {
        const MlsSystem sys = MlsSystem::build(points, basis, model.weight, x);
        double lhat = 0.0, sum_a = 1.0, amp = 2.0;
        if (auto node = sys.zero_node()) {
            lhat = points.values()(static_cast<Eigen::Index>(*node));
        } else {
            const Vector a = solve_coefficients(sys, tol);
            lhat = a.dot(points.values());
            sum_a = a.sum();
            amp = amplification(a);
        }
        Json row = Json::array();
        for (int k = 0; k < d; ++k) {
            csv << format_double(x(k)) << ',';
            row.push_back(x(k));
        }
        csv << format_double(lhat) << ',' << format_double(sum_a) << ',' << format_double(amp) << '\n';
        row.push_back(lhat);
        row.push_back(sum_a);
        row.push_back(amp);
        rows.push_back(row);
    }

    if (cfg.format == "json") {
        Json fields = Json::array();
        for (int k = 0; k < d; ++k)
            fields.push_back("x" + std::to_string(k + 1));
        for (const char* f : {"Lhat", "sum_a", "amplification"})
            fields.push_back(f);
        emit(cfg, dump({{"fields", fields}, {"rows", rows}}));
    } else {
        emit(cfg, csv.str());
    }
    return exit_code::ok;
}

// The certified property groups of a spectral report that failed.
std::vector<std::string> failed_groups(const SpectralReport& r)
{
    std::vector<std::string> out;
    if (!r.symmetry.pass) out.push_back("symmetry");
    if (!r.eigen.pass) out.push_back("eigen_clusters");
    if (!r.psd.pass) out.push_back("psd");
    if (!r.norms.pass) out.push_back("norm_bounds");
    if (!r.idempotence_pass) out.push_back("idempotence");
    return out;
}

int cmd_diagnose(const RunConfig& cfg)
{
    const Tolerances tol = resolve_tolerances(cfg);
    if (cfg.input.empty()) {
        SelftestOptions opt;
        opt.seed = resolve_seed(cfg);
        opt.instances = cfg.instances;
        opt.tol = tol;
        const SuiteResult r = run_spectral_suite(opt);
        std::cerr << r.summary << '\n';
        emit(cfg, dump(selftest_json(opt, {r})));
        return r.pass ? exit_code::ok : exit_code::violation;
    }

    const PointSet points = read_points_csv(cfg.input, false);
    const ModelConfig model = resolve_model(cfg);
    const BasisSpec basis = BasisSpec::monomial(points.dim(), model.l);
    if (int rc = report_hypotheses(check_hypotheses(points, basis, model.weight)))
        return rc;

    const auto grid = resolve_grid(cfg, points, 11);
    const double extent = (points.nodes().colwise().maxCoeff() - points.nodes().colwise().minCoeff()).norm();
    Json reports = Json::array();
    Json violations = Json::array();
    bool pass = true;
    for (Vector x : grid) {
        // D must be invertible here: step interpolating weights off the nodes.
        if (model.weight.interpolating()) {
            for (int i = 0; i < points.size(); ++i)
                if ((x - points.node(i)).norm() <= 1e-12) {
                    x(0) += 1e-9 * (extent > 0.0 ? extent : 1.0);
                    break;
                }
        }
        const MlsSystem sys = MlsSystem::build(points, basis, model.weight, x);
        const SpectralReport rep = diagnose(sys, tol);
        Json j = to_json(rep);
        std::vector<double> xv(x.data(), x.data() + x.size());
        j["x"] = xv;
        for (const auto& g : failed_groups(rep))
            violations.push_back({{"x", xv}, {"check", g}});
        pass = pass && rep.pass;
        reports.push_back(j);
    }

    if (reports.size() == 1 && !cfg.at.empty())
        emit(cfg, dump(reports[0]));
    else
        emit(cfg, dump({{"reports", reports}, {"violations", violations}, {"pass", pass}}));
    for (const auto& v : violations)
        std::cerr << "violation: " << v["check"].get<std::string>() << " at x = " << v["x"].dump() << '\n';
    return pass ? exit_code::ok : exit_code::violation;
}

int cmd_bound(const RunConfig& cfg)
{
    if (cfg.input.empty())
        throw InputError("bound needs --input");
    const PointSet points = read_points_csv(cfg.input, false);
    if (points.dim() != 1) {
        std::cerr << "hypothesis H2.2 fails: bound requires d = 1\n";
        return exit_code::hypothesis;
    }
    const ModelConfig model = resolve_model(cfg);
    const BasisSpec basis = BasisSpec::monomial(1, model.l);
    const Tolerances tol = resolve_tolerances(cfg);
    const Convention convention = parse_convention(cfg.convention);

    std::vector<double> grid;
    for (const Vector& x : resolve_grid(cfg, points, 200))
        grid.push_back(x(0));

    BoundCertificate cert;
    try {
        cert = certify_bound(points, basis, model.weight, grid, convention, tol);
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis " << e.item() << " fails\n";
        return exit_code::hypothesis;
    }
    emit(cfg, cfg.format == "csv" ? bound_csv(cert) : dump(to_json(cert)));
    if (!cert.pass)
        std::cerr << "bound violated: min slack " << cert.min_slack << '\n';
    return cert.pass ? exit_code::ok : exit_code::violation;
}

int cmd_converge(const RunConfig& cfg)
{
    const ModelConfig model = resolve_model(cfg);
    const Tolerances tol = resolve_tolerances(cfg);
    const auto range = split_numbers(cfg.domain, ':');
    if (range.size() != 2)
        throw InputError("--domain expects a:b");

    ConvergenceOptions opt;
    opt.a = range[0];
    opt.b = range[1];
    opt.h0 = cfg.h0;
    opt.levels = cfg.levels;
    opt.l = model.l;
    opt.family = model.weight.family;
    opt.alpha0 = cfg.alpha0;
    opt.scaling = cfg.fixed_alpha ? AlphaScaling::Fixed : AlphaScaling::InverseSquareH;

    ConvergenceStudy study;
    try {
        study = convergence_study(named_function(cfg.function), opt, tol);
    } catch (const PreconditionError& e) {
        throw InputError(e.what());
    }
    emit(cfg, cfg.format == "json" ? dump(to_json(study)) : study_csv(study));
    return exit_code::ok;
}

int cmd_selftest(const RunConfig& cfg)
{
    SelftestOptions opt;
    opt.seed = resolve_seed(cfg);
    opt.instances = cfg.instances;
    opt.tol = resolve_tolerances(cfg);

    const auto results = run_selftest(opt);
    bool pass = true;
    for (const auto& r : results) {
        std::cerr << r.summary << '\n';
        pass = pass && r.pass;
    }
    emit(cfg, dump(selftest_json(opt, results)));
    return pass ? exit_code::ok : exit_code::violation;
}

void add_common(CLI::App* cmd, RunConfig& cfg)
{
    cmd->add_option("--input", cfg.input, "node CSV with header x1,...,xd[,f]");
    cmd->add_option("--config", cfg.config, "weight/basis JSON");
    cmd->add_option("--grid", cfg.grid, "evaluation grid: N or a:b:N");
    cmd->add_option("--seed", cfg.seed, "seed for randomized suites (default $MLS_SEED or 42)");
    cmd->add_option("--out", cfg.out, "output path (default stdout)");
    cmd->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--convention", cfg.convention, "bound constants convention")
        ->check(CLI::IsMember({"standard", "paper"}));
    cmd->add_option("--tol", cfg.tol_overrides, "tolerance override KEY=VAL (repeatable)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Moving least-squares approximation and certification"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* fit = app.add_subcommand("fit", "evaluate the MLS approximation on a grid");
    auto* diag = app.add_subcommand("diagnose", "certify operator symmetry, spectra and norm bounds");
    auto* bound = app.add_subcommand("bound", "certify the exponential bound on ||a(x)|| (d = 1, exp weight)");
    auto* conv = app.add_subcommand("converge", "empirical convergence order under grid halving");
    auto* self = app.add_subcommand("selftest", "run every property suite");
    for (auto* cmd : {fit, diag, bound, conv, self})
        add_common(cmd, cfg);
    diag->add_option("--at", cfg.at, "single evaluation point, comma separated");
    fit->add_option("--at", cfg.at, "single evaluation point, comma separated");
    diag->add_option("--instances", cfg.instances, "random instances (no --input)");
    self->add_option("--instances", cfg.instances, "random instances per suite");
    conv->add_option("--function", cfg.function, "sin, cos, exp, runge, linear, quadratic");
    conv->add_option("--domain", cfg.domain, "a:b");
    conv->add_option("--h0", cfg.h0, "coarsest node spacing");
    conv->add_option("--levels", cfg.levels, "number of halvings (>= 3)");
    conv->add_option("--alpha0", cfg.alpha0, "shape parameter at h = 1");
    conv->add_flag("--fixed-alpha", cfg.fixed_alpha, "keep alpha = alpha0 at every level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_code::ok : exit_code::usage;
    }

    try {
        if (*fit) return cmd_fit(cfg);
        if (*diag) return cmd_diagnose(cfg);
        if (*bound) return cmd_bound(cfg);
        if (*conv) return cmd_converge(cfg);
        if (*self) return cmd_selftest(cfg);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code::malformed_input;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code::malformed_input;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code::malformed_input;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis " << e.item() << " fails: " << e.what() << '\n';
        return exit_code::hypothesis;
    } catch (const ConditioningError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code::conditioning;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code::malformed_input;
    }
    return exit_code::usage;
}
