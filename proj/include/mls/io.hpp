#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "mls/bound1d.hpp"
#include "mls/error_analysis.hpp"
#include "mls/point_set.hpp"
#include "mls/spectral.hpp"
#include "mls/system.hpp"
#include "mls/tolerances.hpp"
#include "mls/weight.hpp"

namespace mls {

using Json = nlohmann::json;

/// Node CSV: header `x1,...,xd[,f]`, one node per row, `.` decimal
/// separator. Throws InputError on malformed input, or when
/// `require_values` is set and the f column is missing.
PointSet read_points_csv(std::istream& in, bool require_values = false);
PointSet read_points_csv(const std::filesystem::path& path, bool require_values = false);

/// Weight and basis settings:
///   { "weight": {"family": "exp", "alpha": 1.0}, "basis": {"kind": "monomial", "l": 2} }
struct ModelConfig {
    WeightSpec weight = WeightSpec::exp(1.0);
    int l = 2;
};

ModelConfig parse_model_config(const Json& j);
ModelConfig read_model_config(const std::filesystem::path& path);

/// Shortest round-trip decimal form (at most 17 significant digits).
std::string format_double(double v);

Json to_json(const Tolerances& tol);
Json to_json(const HypothesisReport& report);
Json to_json(const InequalityCheck& check);
Json to_json(const SpectralReport& report);
Json to_json(const SvInequalityReport& report);
Json to_json(const LuPearceReport& report);
Json to_json(const BoundConstants& constants);
Json to_json(const BoundCertificate& cert);
Json to_json(const ConvergenceStudy& study);

/// `x,lhs,rhs,slack` rows.
std::string bound_csv(const BoundCertificate& cert);
/// `level,h,sup_error,amplification,observed_order_cum` rows.
std::string study_csv(const ConvergenceStudy& study);

/// Keys sorted, two-space indent, trailing newline.
std::string dump(const Json& j);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace mls
