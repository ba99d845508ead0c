// scenarios.hpp — Single runs, parameter sweeps and figure presets

#pragma once

#include "tlscool/config.hpp"
#include "tlscool/trajectory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tlscool {

inline constexpr const char* kTensorOrdering = "Fock-major, TLS-minor: index = 2n + s (s=0 down, s=1 up)";

// Runs one configuration end to end. Throws PropagationError or ConfigError.
Trajectory run_single(const RunConfig& config);

struct GridAxis {
    std::string key;                  // any config key
    std::vector<std::string> values;  // textual values, applied with apply_setting
};

using GridCoords = std::vector<std::pair<std::string, std::string>>;

struct SweepRow {
    GridCoords coords;
    RunConfig config;
    std::optional<Trajectory> trajectory;
    double end_value = 0.0;
    bool truncation_ok = false;
    std::string error;  // empty when the run succeeded

    bool ok() const { return error.empty() && truncation_ok; }
    std::string label() const;
};

struct SweepOptions {
    int jobs = 1;
    // Also run every point at dt/2 and flag end values that move by ≥ 1e-4.
    bool check_convergence = false;
    double convergence_tolerance = 1e-4;
};

// Cartesian product of the axes over `base`, executed on `jobs` worker
// threads. Rows come back in grid order. Duplicate axis values are dropped
// with a warning. A failing run is recorded in its row.
std::vector<SweepRow> sweep(const std::vector<GridAxis>& grid, const RunConfig& base, const SweepOptions& options = {});

enum class ScenarioName { Fig1a, Fig1b, Fig2, Fig3a, Fig3b };

const char* to_string(ScenarioName s);
std::optional<ScenarioName> parse_scenario(const std::string& name);

// γ_τ values swept by the third-figure scenarios.
const std::vector<double>& gamma_tau_grid();

std::vector<GridAxis> scenario_grid(ScenarioName name);
// The scenario's fixed settings applied on top of `base`.
RunConfig scenario_base(ScenarioName name, RunConfig base);

struct ScenarioResult {
    ScenarioName name;
    std::vector<SweepRow> rows;

    std::vector<Trajectory> trajectories() const;
};

// Throws std::runtime_error naming the scenario and grid point when any run
// fails its guards.
ScenarioResult run_scenario(ScenarioName name, const RunConfig& base, const SweepOptions& options = {});

}  // namespace tlscool
