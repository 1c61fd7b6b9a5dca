#include "mls/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "mls/errors.hpp"

namespace mls {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

double parse_number(const std::string& field, int row, int col)
{
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (!field.empty() && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || field.empty() || !std::isfinite(v))
        throw InputError("row " + std::to_string(row) + ", column " + std::to_string(col) + ": '" + field +
                         "' is not a finite number");
    return v;
}

} // namespace

PointSet read_points_csv(std::istream& in, bool require_values)
{
    std::string line;
    if (!std::getline(in, line))
        throw InputError("empty CSV input");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
        line.erase(0, 3);

    const auto header = split(line);
    int dim = 0;
    bool has_f = false;
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] == "x" + std::to_string(k + 1) && !has_f) {
            ++dim;
        } else if (header[k] == "f" && k + 1 == header.size() && dim > 0) {
            has_f = true;
        } else {
            throw InputError("bad CSV header column '" + header[k] + "' (expected x1,...,xd[,f])");
        }
    }
    if (dim == 0)
        throw InputError("CSV header has no coordinate columns");
    if (require_values && !has_f)
        throw InputError("CSV input has no f column");

    const std::size_t cols = header.size();
    std::vector<std::vector<double>> rows;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty())
            continue;
        const auto fields = split(line);
        if (fields.size() != cols)
            throw InputError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(cols));
        std::vector<double> r(cols);
        for (std::size_t k = 0; k < cols; ++k)
            r[k] = parse_number(fields[k], row, static_cast<int>(k + 1));
        rows.push_back(std::move(r));
    }
    if (rows.empty())
        throw InputError("CSV input has no data rows");

    Matrix nodes(static_cast<Eigen::Index>(rows.size()), dim);
    Vector values(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int k = 0; k < dim; ++k)
            nodes(static_cast<Eigen::Index>(i), k) = rows[i][static_cast<std::size_t>(k)];
        if (has_f)
            values(static_cast<Eigen::Index>(i)) = rows[i].back();
    }
    try {
        return has_f ? PointSet(std::move(nodes), std::move(values)) : PointSet(std::move(nodes));
    } catch (const DomainError& e) {
        throw InputError(e.what());
    }
}

PointSet read_points_csv(const std::filesystem::path& path, bool require_values)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path.string());
    return read_points_csv(in, require_values);
}

ModelConfig parse_model_config(const Json& j)
{
    ModelConfig cfg;
    try {
        if (j.contains("weight")) {
            const auto& w = j.at("weight");
            const WeightFamily family = parse_weight_family(w.value("family", std::string("exp")));
            const double alpha = w.value("alpha", 1.0);
            if (!(alpha > 0.0))
                throw ConfigError("weight alpha must be positive");
            cfg.weight.family = family;
            cfg.weight.alpha = alpha;
        }
        if (j.contains("basis")) {
            const auto& b = j.at("basis");
            const std::string kind = b.value("kind", std::string("monomial"));
            if (kind != "monomial")
                throw ConfigError("basis kind '" + kind + "' cannot be configured from JSON");
            cfg.l = b.value("l", 2);
            if (cfg.l < 1)
                throw ConfigError("basis size l must be positive");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    return cfg;
}

ModelConfig read_model_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path.string());
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed JSON config: ") + e.what());
    }
    return parse_model_config(j);
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

namespace {

Json vec_json(const Vector& v)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(v(i));
    return a;
}

Json checks_json(const std::vector<InequalityCheck>& checks)
{
    Json a = Json::array();
    for (const auto& c : checks)
        a.push_back(to_json(c));
    return a;
}

Json cluster_json(const EigenCluster& c)
{
    return {{"center", c.center}, {"count", c.count}, {"expected", c.expected}, {"max_deviation", c.max_deviation}};
}

} // namespace

Json to_json(const Tolerances& t)
{
    return {{"lin", t.lin},
            {"scale_invariance", t.scale_invariance},
            {"oracle", t.oracle},
            {"symmetry", t.symmetry},
            {"idempotence", t.idempotence},
            {"eig_cluster", t.eig_cluster},
            {"psd", t.psd},
            {"norm", t.norm},
            {"norm_a1", t.norm_a1},
            {"sv", t.sv},
            {"bound", t.bound},
            {"fd_ode", t.fd_ode},
            {"max_gram_condition", t.max_gram_condition}};
}

Json to_json(const HypothesisReport& r)
{
    Json j{{"m", r.m},
           {"l", r.l},
           {"rank", r.rank},
           {"H1.1", r.constant_in_span},
           {"H1.2", r.l_le_m},
           {"H1.3", r.full_rank},
           {"H1.4", r.weight_smooth},
           {"pass", r.all()}};
    return j;
}

Json to_json(const InequalityCheck& c)
{
    return {{"name", c.name},
            {"kind", c.kind == InequalityCheck::Kind::Equal ? "equal" : "less_equal"},
            {"lhs", c.lhs},
            {"rhs", c.rhs},
            {"slack", c.slack()},
            {"tolerance", c.tolerance},
            {"pass", c.pass}};
}

Json to_json(const SpectralReport& r)
{
    Json j;
    j["symmetry"] = {{"A1Dinv", r.symmetry.a1_dinv},
                     {"A2Dinv", r.symmetry.a2_dinv},
                     {"tolerance", r.symmetry.tolerance},
                     {"pass", r.symmetry.pass}};
    j["eigen"] = {{"A1", vec_json(r.eigen.a1_eigenvalues)},
                  {"A2", vec_json(r.eigen.a2_eigenvalues)},
                  {"A1_one", cluster_json(r.eigen.a1_one)},
                  {"A1_zero", cluster_json(r.eigen.a1_zero)},
                  {"A2_zero", cluster_json(r.eigen.a2_zero)},
                  {"A2_minus_one", cluster_json(r.eigen.a2_minus_one)},
                  {"max_deviation", r.eigen.max_deviation},
                  {"trace_A1", r.eigen.trace_a1},
                  {"nonsymmetric_deviation", r.eigen.nonsymmetric_deviation},
                  {"structural_failure", r.eigen.structural_failure},
                  {"tolerance", r.eigen.tolerance},
                  {"pass", r.eigen.pass}};
    j["psd"] = {{"A1Dinv_min_eigenvalue", r.psd.a1_dinv_min},
                {"minus_A2Dinv_min_eigenvalue", r.psd.minus_a2_dinv_min},
                {"scale", r.psd.scale},
                {"tolerance", r.psd.tolerance},
                {"pass", r.psd.pass}};
    j["norms"] = {{"standard", checks_json(r.norms.standard)},
                  {"sqrt_convention", checks_json(r.norms.sqrt_reading)},
                  {"pass", r.norms.pass}};
    j["idempotence"] = {{"residual", r.idempotence}, {"pass", r.idempotence_pass}};
    j["tolerances"] = to_json(r.tolerances);
    j["pass"] = r.pass;
    return j;
}

Json to_json(const SvInequalityReport& r)
{
    return {{"checks", checks_json(r.checks)}, {"pass", r.pass}};
}

Json to_json(const LuPearceReport& r)
{
    return {{"U_eigenvalues", vec_json(r.u_eigenvalues)},
            {"V_eigenvalues", vec_json(r.v_eigenvalues)},
            {"VU_eigenvalues", vec_json(r.product_eigenvalues)},
            {"positive", r.positive},
            {"negative", r.negative},
            {"zero", r.zero},
            {"corollary_applicable", r.corollary_applicable},
            {"roles_swapped", r.roles_swapped},
            {"checks", checks_json(r.checks)},
            {"pass", r.pass}};
}

Json to_json(const BoundConstants& k)
{
    Json j{{"r", k.r},
           {"alpha", k.alpha},
           {"sigma_min_Et", k.sigma_min_Et},
           {"M2", k.M2},
           {"M11", k.M11},
           {"M12", k.M12},
           {"M1", k.M1},
           {"M12_grid", k.M12_grid},
           {"M12_grid_points", kM12GridPoints},
           {"M12_inflation", kM12Inflation},
           {"convention", to_string(k.convention)},
           {"M11_definition", "kappa(D) bound / sigma_min(E^t)"}};
    j["M12_closed_form"] = k.M12_closed_form ? Json(*k.M12_closed_form) : Json(nullptr);
    j["M22_sqrt"] = k.M22_sqrt ? Json(*k.M22_sqrt) : Json(nullptr);
    j["dbar_norm"] = k.dbar_norm ? Json(*k.dbar_norm) : Json(nullptr);
    return j;
}

Json to_json(const BoundCertificate& c)
{
    Json pts = Json::array();
    for (const auto& p : c.points)
        pts.push_back(Json::array({p.x, p.lhs, p.rhs, p.k0 + 1, p.slack}));
    Json maj = Json::array();
    for (const auto& p : c.points)
        maj.push_back(Json::array({p.x, p.a2h_norm, p.a0dc_norm}));
    return {{"constants", to_json(c.constants)},
            {"points", pts},
            {"point_fields", Json::array({"x", "lhs", "rhs", "k0", "slack"})},
            {"majorants", maj},
            {"majorant_fields", Json::array({"x", "norm_A2H", "norm_A0_dc"})},
            {"tolerance", c.tolerance},
            {"min_slack", c.min_slack},
            {"majorants_pass", c.majorants_pass},
            {"pass", c.pass}};
}

Json to_json(const ConvergenceStudy& s)
{
    Json levels = Json::array();
    for (const auto& L : s.levels) {
        levels.push_back({{"h", L.h},
                          {"alpha", L.alpha},
                          {"nodes", L.nodes},
                          {"sup_error", L.sup_error},
                          {"amplification", L.amplification},
                          {"saturated", L.saturated},
                          {"minimax_error", L.minimax_error},
                          {"error_bound_ratio", L.error_bound_ratio},
                          {"bound_violations", L.bound_violations},
                          {"bound_near_violations", L.bound_near_violations},
                          {"observed_order_cum", L.observed_order_cum ? Json(*L.observed_order_cum) : Json(nullptr)}});
    }
    return {{"levels", levels},
            {"observed_order", s.observed_order ? Json(*s.observed_order) : Json(nullptr)},
            {"fitted_levels", s.fitted_levels},
            {"exact_reproduction", s.exact_reproduction},
            {"error_bound_pass", s.error_bound_pass}};
}

std::string bound_csv(const BoundCertificate& cert)
{
    std::ostringstream out;
    out << "x,lhs,rhs,slack\n";
    for (const auto& p : cert.points)
        out << format_double(p.x) << ',' << format_double(p.lhs) << ',' << format_double(p.rhs) << ','
            << format_double(p.slack) << '\n';
    return out.str();
}

std::string study_csv(const ConvergenceStudy& study)
{
    std::ostringstream out;
    out << "level,h,sup_error,amplification,observed_order_cum\n";
    for (std::size_t i = 0; i < study.levels.size(); ++i) {
        const auto& L = study.levels[i];
        out << i << ',' << format_double(L.h) << ',' << format_double(L.sup_error) << ','
            << format_double(L.amplification) << ','
            << (L.observed_order_cum ? format_double(*L.observed_order_cum) : std::string()) << '\n';
    }
    return out.str();
}

std::string dump(const Json& j)
{
    return j.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw InputError("cannot write " + tmp.string());
        out << content;
        if (!out.flush())
            throw InputError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace mls
