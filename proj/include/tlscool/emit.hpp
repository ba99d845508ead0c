// emit.hpp — CSV output for trajectories, sweep summaries and plot data
//
// Every file is plain CSV. Trajectory files start with a block of
// `# key = value` lines (config echo and conventions) followed by the header
//   t_omega_m,n_osc,tls_excited,trace_err,min_eig,purity
// Numbers are printed with a fixed format so reruns are byte-identical.

#pragma once

#include "tlscool/scenarios.hpp"
#include "tlscool/trajectory.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace tlscool {

inline constexpr const char* kTrajectoryHeader = "t_omega_m,n_osc,tls_excited,trace_err,min_eig,purity";

class EmitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string trajectory_csv(const Trajectory& traj);
std::string summary_csv(const std::vector<SweepRow>& rows);
// Wide table ready for plotting: time series per run for the time-domain
// figures, end value versus γ_τ (one column per pulse count) for the γ_τ scans.
std::string plot_data_csv(const ScenarioResult& result);

// File stem for a grid point, e.g. "n_pulses_9" or "gamma_tau_1e-06__n_pulses_99".
std::string row_stem(const GridCoords& coords);

// Writes text to path, creating parent directories. Throws EmitError naming the path.
void write_text(const std::filesystem::path& path, const std::string& text);

// out_dir/<scenario>/{<row>.csv..., summary.csv, plot_data.csv}. Returns the paths written.
std::vector<std::filesystem::path> emit_scenario(const ScenarioResult& result, const std::filesystem::path& out_dir);
// out_dir/<stem>.csv per successful row plus out_dir/summary.csv.
std::vector<std::filesystem::path> emit_sweep(const std::vector<SweepRow>& rows, const std::filesystem::path& out_dir);

}  // namespace tlscool
