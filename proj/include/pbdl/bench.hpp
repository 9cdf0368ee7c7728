#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

// Named end-to-end scenarios.  The acceptance suite and the bench subcommand
// both run these; defaults are the acceptance parameters, the CLI can dial
// trials and sizes up or down.

namespace pbdl {

struct ScenarioParams {
    std::string name;
    std::int64_t trials = 0;     // 0 = scenario default
    std::uint64_t base_seed = 1; // every trial derives substreams from this
    double epsilon = 0.0;        // 0 = scenario default
    double tau = 0.0;            // 0 = scenario default
    std::int64_t n = 0;          // 0 = scenario default
    std::int64_t k_override = 0; // 0 = scenario default
    int threads = 0;             // 0 = leave thread count alone
};

struct TrialRow {
    std::int64_t trial = 0;
    std::uint64_t seed = 0;
    double error = 0.0;     // scenario's per-trial statistic
    double threshold = 0.0; // what it was compared against
    std::string form;       // accepted form / case label
    std::int64_t samples = 0;
    double wall_ms = 0.0;
    bool ok = false;
};

struct ScenarioResult {
    std::string name;
    std::vector<TrialRow> rows;
    double success_fraction = 0.0;
    double required_fraction = 1.0;
    double stat = 0.0;       // scenario-specific aggregate (e.g. max residual)
    std::string stat_label;
    std::string notes;
    bool pass = false;
    double total_seconds = 0.0;
};

const std::vector<std::string>& scenario_names();

ScenarioResult run_scenario(const ScenarioParams& params);

// "# pbdl-bench v1" comment, a header row, one row per trial, a summary row.
void write_csv(std::ostream& os, const ScenarioResult& r);

} // namespace pbdl
