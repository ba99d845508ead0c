// simulate — run one configuration or a figure scenario and write CSV output.
//
//   simulate --config configs/fig1a.conf --pulses 99 --out out
//   simulate --scenario fig2 --jobs 4 --out out
//
// Exit status: 0 when every run passes its quality flags, 1 when a run fails
// a flag (truncation, guards, dt convergence), 2 on usage/config errors.

#include "tlscool/config.hpp"
#include "tlscool/emit.hpp"
#include "tlscool/scenarios.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <optional>
#include <thread>

using namespace tlscool;

namespace {

void print_rows(const std::vector<SweepRow>& rows) {
    for (const SweepRow& r : rows) {
        if (!r.error.empty())
            fmt::print("{:<40} ERROR {}\n", r.label(), r.error);
        else
            fmt::print("{:<40} <n_osc>(T) = {:.6f}  truncation {}\n", r.label(), r.end_value,
                       r.truncation_ok ? "ok" : "FAILED");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pulsed TLS-assisted resonator cooling simulator"};
    app.set_version_flag("--version", std::string("tlscool ") + TLSCOOL_VERSION);

    std::string config_path, scenario_name, approach, angular, out_dir = "out";
    std::optional<int> pulses, nmax;
    std::vector<std::string> settings;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    bool check_convergence = false;

    app.add_option("--config", config_path, "key = value config file (defaults to the first-figure preset)")
        ->check(CLI::ExistingFile);
    app.add_option("--scenario", scenario_name, "fig1a|fig1b|fig2|fig3a|fig3b")
        ->check(CLI::IsMember({"fig1a", "fig1b", "fig2", "fig3a", "fig3b"}));
    app.add_option("--pulses", pulses, "number of pulses N (single run only)")->check(CLI::NonNegativeNumber);
    app.add_option("--nmax", nmax, "Fock cutoff")->check(CLI::Range(2, 100000));
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--approach", approach, "polariton|simple")->check(CLI::IsMember({"polariton", "simple"}));
    app.add_option("--angular-convention", angular, "read omega_m_hz as f (on: omega = 2 pi f)")
        ->check(CLI::IsMember({"on", "off"}));
    app.add_option("--set", settings, "extra key=value override, repeatable");
    app.add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_flag("--check-convergence", check_convergence, "rerun every point at dt/2 and flag drifts >= 1e-4");
    CLI11_PARSE(app, argc, argv);

    RunConfig base;
    try {
        base = config_path.empty() ? fig1_preset() : load_config(config_path);
        if (nmax) apply_setting(base, "nmax", std::to_string(*nmax), "--nmax");
        if (!approach.empty()) apply_setting(base, "approach", approach, "--approach");
        if (!angular.empty()) apply_setting(base, "angular_convention", angular, "--angular-convention");
        for (const std::string& s : settings) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError(fmt::format("--set '{}': expected key=value", s));
            apply_setting(base, s.substr(0, eq), s.substr(eq + 1), "--set");
        }
        if (pulses) {
            if (!scenario_name.empty()) throw ConfigError("--pulses cannot be combined with --scenario");
            apply_setting(base, "n_pulses", std::to_string(*pulses), "--pulses");
        }
        if (!scenario_name.empty() && !approach.empty() &&
            (scenario_name == "fig1a" || scenario_name == "fig1b"))
            throw ConfigError(fmt::format("--approach conflicts with scenario {}", scenario_name));
        base.validate();
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    }

    SweepOptions options;
    options.jobs = jobs;
    options.check_convergence = check_convergence;

    try {
        std::vector<SweepRow> rows;
        if (!scenario_name.empty()) {
            const ScenarioResult result = run_scenario(*parse_scenario(scenario_name), base, options);
            rows = result.rows;
            const auto files = emit_scenario(result, out_dir);
            fmt::print("scenario {}: wrote {} files under {}/{}\n", scenario_name, files.size(), out_dir,
                       scenario_name);
        } else {
            rows = sweep({}, base, options);
            if (rows.front().trajectory) {
                const auto files = emit_sweep(rows, out_dir);
                fmt::print("wrote {} files under {}\n", files.size(), out_dir);
            }
        }
        print_rows(rows);
        bool ok = true;
        for (const SweepRow& r : rows) ok = ok && r.ok();
        return ok ? 0 : 1;
    } catch (const EmitError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
}
