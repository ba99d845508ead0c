#include "tlscool/scenarios.hpp"

#include "tlscool/dissipation.hpp"
#include "tlscool/polariton.hpp"
#include "tlscool/pulse_engine.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace tlscool {

Trajectory run_single(const RunConfig& config) {
    config.validate();
    const SystemParams& p = config.params;
    const SpaceDims space(config.nmax);
    const PolaritonBasis basis(p, space);
    const Matrix& u = basis.transform();

    const Matrix tls = config.initial_state == InitialState::ThermalThermal ? tls_thermal_factor(p.omega_z, p.theta)
                                                                             : tls_ground_factor();
    const double n_initial = bose_occupation(1.0, p.theta);
    const DensityMatrix rho_product = thermal_resonator_state(space, n_initial, tls);

    // The polariton model lives in the JC eigenbasis, the simple model in the
    // bare product basis; pulses and observables follow the working basis.
    const bool polariton_frame = config.approach == Approach::Polariton;
    const Generator generator = polariton_frame
                                    ? build_polariton_generator(basis, build_transition_table(basis, p), p)
                                    : build_simple_generator(p, space);
    const Operator pulse = polariton_frame ? pulse_matrix(basis) : build_tls_ops(space).sigma_z;
    const Observables obs = polariton_frame ? rotated_observables(space, u) : product_observables(space);
    const DensityMatrix rho0 = polariton_frame ? DensityMatrix(basis.to_polariton(rho_product.matrix()), space)
                                               : rho_product;

    Trajectory traj = evolve_pulsed(rho0, generator, pulse, uniform_schedule(config.n_pulses, config.horizon),
                                    uniform_sampling(config.horizon, config.sample_every), config.integrator, obs);

    traj.set_meta("code_version", fmt::format("tlscool {}", TLSCOOL_VERSION));
    for (const auto& [k, v] : describe(config)) traj.set_meta(k, v);
    traj.set_meta("convention.delta_b", p.delta_b ? fmt::format("delta_b = {} (override)", format_number(*p.delta_b))
                                                  : std::string("delta_b = delta_l"));
    traj.set_meta("convention.pulse_spacing", kPulseSpacingRule);
    traj.set_meta("convention.initial_state",
                  config.initial_state == InitialState::ThermalThermal
                      ? "resonator thermal at theta (x) TLS thermal at omega_z*theta"
                      : "resonator thermal at theta (x) TLS ground");
    traj.set_meta("convention.tensor_ordering", kTensorOrdering);
    traj.set_meta("convention.frequency", config.temperature.describe());
    traj.set_meta("working_basis", polariton_frame ? "polariton (JC eigenbasis)" : "bare product");
    traj.set_meta("initial_n_th", format_number(n_initial));
    traj.set_meta("max_top_population", format_number(traj.max_top_population));
    traj.set_meta("truncation_ok", traj.truncation_ok() ? "yes" : "no");
    return traj;
}

std::string SweepRow::label() const {
    std::string out;
    for (const auto& [k, v] : coords) {
        if (!out.empty()) out += ',';
        out += k + '=' + v;
    }
    return out.empty() ? "base" : out;
}

std::vector<SweepRow> sweep(const std::vector<GridAxis>& grid, const RunConfig& base, const SweepOptions& options) {
    std::vector<GridAxis> axes;
    for (const GridAxis& axis : grid) {
        GridAxis clean{axis.key, {}};
        for (const std::string& v : axis.values) {
            if (std::find(clean.values.begin(), clean.values.end(), v) != clean.values.end()) {
                warn(fmt::format("sweep: duplicate value {}={} dropped", axis.key, v));
                continue;
            }
            clean.values.push_back(v);
        }
        if (clean.values.empty()) throw std::invalid_argument(fmt::format("sweep: axis '{}' is empty", axis.key));
        axes.push_back(std::move(clean));
    }

    std::vector<SweepRow> rows;
    std::vector<std::size_t> cursor(axes.size(), 0);
    while (true) {
        SweepRow row;
        row.config = base;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const std::string& v = axes[a].values[cursor[a]];
            row.coords.emplace_back(axes[a].key, v);
            apply_setting(row.config, axes[a].key, v, "sweep");
        }
        rows.push_back(std::move(row));
        // Last axis varies fastest.
        std::size_t a = axes.size();
        while (a > 0) {
            --a;
            if (++cursor[a] < axes[a].values.size()) break;
            cursor[a] = 0;
            if (a == 0) {
                a = axes.size() + 1;
                break;
            }
        }
        if (axes.empty() || a == axes.size() + 1) break;
    }

    auto execute = [&](SweepRow& row) {
        try {
            row.trajectory = run_single(row.config);
            row.end_value = row.trajectory->end_value();
            row.truncation_ok = row.trajectory->truncation_ok();
            if (options.check_convergence) {
                RunConfig half = row.config;
                half.integrator.dt *= 0.5;
                const double delta = std::abs(run_single(half).end_value() - row.end_value);
                row.trajectory->set_meta("dt_half_delta", format_number(delta));
                if (delta < options.convergence_tolerance)
                    row.trajectory->set_meta("converged_dt", format_number(row.config.integrator.dt));
                else
                    row.error = fmt::format("end value moves by {:.3e} when dt is halved", delta);
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(rows.size())));
    if (jobs == 1) {
        for (SweepRow& row : rows) execute(row);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        for (int j = 0; j < jobs; ++j)
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < rows.size(); i = next++) execute(rows[i]);
            });
        for (std::thread& w : workers) w.join();
    }
    return rows;
}

const char* to_string(ScenarioName s) {
    switch (s) {
        case ScenarioName::Fig1a: return "fig1a";
        case ScenarioName::Fig1b: return "fig1b";
        case ScenarioName::Fig2: return "fig2";
        case ScenarioName::Fig3a: return "fig3a";
        case ScenarioName::Fig3b: return "fig3b";
    }
    return "?";
}

std::optional<ScenarioName> parse_scenario(const std::string& name) {
    for (ScenarioName s : {ScenarioName::Fig1a, ScenarioName::Fig1b, ScenarioName::Fig2, ScenarioName::Fig3a,
                           ScenarioName::Fig3b})
        if (name == to_string(s)) return s;
    return std::nullopt;
}

const std::vector<double>& gamma_tau_grid() {
    static const std::vector<double> grid = {1e-6, 3e-6, 1e-5, 3e-5, 1e-4, 3e-4, 1e-3};
    return grid;
}

std::vector<GridAxis> scenario_grid(ScenarioName name) {
    switch (name) {
        case ScenarioName::Fig1a:
        case ScenarioName::Fig1b:
            return {{"n_pulses", {"0", "9", "19", "49", "99"}}};
        case ScenarioName::Fig2:
            return {{"omega_z", {"0.6", "0.8", "0.95"}}, {"n_pulses", {"0", "99", "199"}}};
        case ScenarioName::Fig3a:
        case ScenarioName::Fig3b: {
            GridAxis gamma{"gamma_tau", {}};
            for (double g : gamma_tau_grid()) gamma.values.push_back(format_number(g));
            return {gamma, {"n_pulses", {"0", "99"}}};
        }
    }
    return {};
}

RunConfig scenario_base(ScenarioName name, RunConfig base) {
    // fig2 and fig3 keep the base approach (polariton unless overridden).
    switch (name) {
        case ScenarioName::Fig1a: base.approach = Approach::Polariton; break;
        case ScenarioName::Fig1b: base.approach = Approach::Simple; break;
        case ScenarioName::Fig2: break;
        case ScenarioName::Fig3a: base.params.omega_z = 0.95; break;
        case ScenarioName::Fig3b: base.params.omega_z = 0.6; break;
    }
    return base;
}

std::vector<Trajectory> ScenarioResult::trajectories() const {
    std::vector<Trajectory> out;
    for (const SweepRow& r : rows)
        if (r.trajectory) out.push_back(*r.trajectory);
    return out;
}

ScenarioResult run_scenario(ScenarioName name, const RunConfig& base, const SweepOptions& options) {
    ScenarioResult result{name, sweep(scenario_grid(name), scenario_base(name, base), options)};
    for (const SweepRow& row : result.rows) {
        if (!row.error.empty())
            throw std::runtime_error(fmt::format("scenario {} at {}: {}", to_string(name), row.label(), row.error));
    }
    for (SweepRow& row : result.rows) row.trajectory->set_meta("scenario", to_string(name));
    return result;
}

}  // namespace tlscool
