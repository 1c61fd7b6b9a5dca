#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mls/tolerances.hpp"

namespace mls {

/// Process exit codes shared by the CLI commands.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int malformed_input = 2;
inline constexpr int hypothesis = 3;
inline constexpr int conditioning = 4;
inline constexpr int violation = 5;
} // namespace exit_code

struct SuiteResult {
    std::string name;
    bool pass = false;
    int instances = 0;
    nlohmann::json details;
    std::string summary; // one human-readable line
};

struct SelftestOptions {
    std::uint64_t seed = 42;
    int instances = 200;       // per randomized suite
    int bound_instances = 20;  // coefficient-bound and ODE suites
    int bound_grid = 200;
    Tolerances tol;
};

/// I-1..I-5: partition of unity, reproduction, scale invariance,
/// agreement with the weighted normal equations, Shepard interpolation.
SuiteResult run_core_suite(const SelftestOptions& opt);

/// S-1..S-5 over random MLS systems, plus the generic singular value
/// and Lu-Pearce eigenvalue inequalities over random matrices.
SuiteResult run_spectral_suite(const SelftestOptions& opt);

/// B-1..B-5: ODE finite differences, pointwise majorants, the
/// certificate, the differentiation matrix spectrum, ||H||.
SuiteResult run_bound_suite(const SelftestOptions& opt);

/// E-1..E-3: error bound with the minimax estimate, amplification >= 1,
/// observed order monotone in l.
SuiteResult run_error_suite(const SelftestOptions& opt);

std::vector<SuiteResult> run_selftest(const SelftestOptions& opt);

/// Deterministic JSON summary of a selftest run.
nlohmann::json selftest_json(const SelftestOptions& opt, const std::vector<SuiteResult>& results);

} // namespace mls
