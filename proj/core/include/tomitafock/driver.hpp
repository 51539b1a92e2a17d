#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tomitafock/classify.hpp"
#include "tomitafock/moments.hpp"

namespace tomitafock {

/// Shared configuration of the CLI commands and the property-test driver.
struct RunConfig {
    std::string category = "trivial"; // catalog name or JSON file path
    std::string lambda_spec = "uniform:1";
    int depth = 6;
    int moment_order = 6;
    std::uint64_t seed = 42;
    double tol_moments = 1e-10;
    double tol_structural = 1e-12;
    double tol_spectrum = 1e-9;
    std::size_t basis_cap = 2'000'000;
    std::string format = "json"; // json | csv
    int threads = 0;             // 0 = auto; TOMITA_FOCK_THREADS caps
    int words_per_model = 50;    // oracle-equivalence sample size per model
    int hist_bins = 40;
    int hist_dim_cap = 1200;
};

/// "uniform:x", "geometric:x" (integer-indexed labels) or "a=2,b=1/3,...".
/// Labels not listed default to λ = 1.
LambdaAssignment parse_lambda_spec(const FusionData& f, const std::string& spec);

Model build_model(const std::string& category, const std::string& lambda_spec);
Model build_model(const RunConfig& cfg);

/// Effective parallelism: config value, else hardware, capped by the
/// TOMITA_FOCK_THREADS environment variable; at least 1.
int thread_budget(int configured = 0);

struct NamedModel {
    std::string name;
    Model model;
};

/// The test catalog: {trivial, fib, ising, zmod:3, zwindow:4} under
/// λ = uniform:1 and under λ = 2 on one designated letter.
std::vector<NamedModel> test_catalog();

struct SuiteResult {
    std::string name;
    bool pass = false;
    double residual = 0;
    double tolerance = 0;
    std::string details;
};

/// Runs the six invariant suites (freeness, modular_flow, mp_law,
/// oracle_equivalence, tomita_axioms, vacuum_projection) over the catalog.
/// Independent suites may run in parallel; results are ordered by suite name
/// and bitwise deterministic for a fixed config.
std::vector<SuiteResult> run_proptest(const RunConfig& cfg);

// Command bodies. InputError propagates (the CLI maps it to exit 2);
// the return value is 0 on success, 1 on tolerance failure.
int cmd_validate(const RunConfig& cfg, std::ostream& out);
int cmd_moments(const RunConfig& cfg, const std::string& word_text, std::ostream& out);
int cmd_spectrum(const RunConfig& cfg, const std::string& xi_text, std::ostream& out);
int cmd_classify(const RunConfig& cfg, std::ostream& out);
int cmd_proptest(const RunConfig& cfg, std::ostream& out);

} // namespace tomitafock
