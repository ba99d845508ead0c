#include "tlscool/pulse_engine.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tlscool {

PulseSchedule::PulseSchedule(std::vector<double> times, double horizon) : times_(std::move(times)), horizon_(horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument(fmt::format("pulse schedule horizon must be > 0, got {}", horizon));
    for (std::size_t j = 0; j < times_.size(); ++j) {
        const double t = times_[j];
        if (!(t > 0.0 && t < horizon))
            throw std::invalid_argument(fmt::format("pulse {} at t = {} is outside (0, {})", j, t, horizon));
        if (j > 0 && !(t > times_[j - 1]))
            throw std::invalid_argument(fmt::format("pulse times must be strictly increasing (pulse {})", j));
    }
}

PulseSchedule uniform_schedule(int n_pulses, double horizon) {
    if (n_pulses < 0) throw std::invalid_argument(fmt::format("pulse count must be >= 0, got {}", n_pulses));
    std::vector<double> times;
    times.reserve(n_pulses);
    for (int j = 1; j <= n_pulses; ++j) times.push_back(j * horizon / (n_pulses + 1));
    return {std::move(times), horizon};
}

std::vector<double> uniform_sampling(double horizon, double every) {
    if (!(horizon > 0.0)) throw std::invalid_argument("sampling horizon must be > 0");
    if (!(every > 0.0)) throw std::invalid_argument("sampling interval must be > 0");
    std::vector<double> out;
    const long count = static_cast<long>(std::floor(horizon / every + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(std::min(k * every, horizon));
    if (horizon - out.back() > 1e-9 * horizon)
        out.push_back(horizon);
    else
        out.back() = horizon;
    return out;
}

DensityMatrix apply_pulse(const DensityMatrix& rho, const Operator& pulse) {
    if (!(rho.space() == pulse.space)) throw std::invalid_argument("apply_pulse: space mismatch");
    const Matrix& v = pulse.matrix;
    const double unitarity = (v * v.adjoint() - Matrix::Identity(v.rows(), v.cols())).cwiseAbs().maxCoeff();
    if (unitarity > 1e-10)
        throw std::invalid_argument(fmt::format("apply_pulse: pulse is not unitary (residual {:.3e})", unitarity));
    return {v * rho.matrix() * v.adjoint(), rho.space()};
}

Observables product_observables(const SpaceDims& space) {
    const Operator b = build_ladder(space);
    const TlsOperators tls = build_tls_ops(space);
    return {b.adjoint() * b, tls.sigma_plus * tls.sigma_minus, top_level_projector(space)};
}

Observables rotated_observables(const SpaceDims& space, const Matrix& u) {
    const Observables p = product_observables(space);
    return {Operator{rotate(u, p.n_osc.matrix), space}, Operator{rotate(u, p.tls_excited.matrix), space},
            Operator{rotate(u, p.top_level.matrix), space}};
}

namespace {

struct Event {
    double t;
    bool pulse;
    bool sample;
};

Sample measure(const DensityMatrix& rho, double t, const Observables& obs, double& top_population) {
    Sample s;
    s.t = t;
    s.n_osc = expectation(rho, obs.n_osc).real();
    s.tls_excited = expectation(rho, obs.tls_excited).real();
    s.trace_err = std::abs(rho.matrix().trace() - Complex(1.0, 0.0));
    s.min_eig = rho.min_eigenvalue();
    s.purity = rho.purity();
    top_population = std::max(top_population, expectation(rho, obs.top_level).real());
    return s;
}

}  // namespace

Trajectory evolve_pulsed(const DensityMatrix& rho0, const Generator& generator, const Operator& pulse,
                         const PulseSchedule& schedule, const std::vector<double>& sampling,
                         const IntegratorConfig& config, const Observables& observables) {
    const double horizon = schedule.horizon();
    const double same_instant = 1e-12 * horizon;

    std::vector<Event> events;
    for (double t : schedule.times()) events.push_back({t, true, false});
    for (double t : sampling) {
        if (t < -same_instant || t > horizon + same_instant)
            throw std::invalid_argument(fmt::format("sampling time {} outside [0, {}]", t, horizon));
        events.push_back({std::clamp(t, 0.0, horizon), false, true});
    }
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
    std::vector<Event> merged;
    for (const Event& e : events) {
        if (!merged.empty() && e.t - merged.back().t <= same_instant) {
            Event& m = merged.back();
            if (e.pulse) m.t = e.t;  // pulse timing is authoritative
            m.pulse = m.pulse || e.pulse;
            m.sample = m.sample || e.sample;
        } else {
            merged.push_back(e);
        }
    }

    Propagator propagator(generator, config);
    Trajectory traj;
    DensityMatrix rho = rho0;
    double now = 0.0;
    const GuardLimits& g = config.guards;
    for (const Event& e : merged) {
        if (e.t > now) {
            rho = propagator.advance(rho, e.t - now);
            now = e.t;
        }
        if (e.pulse) rho = apply_pulse(rho, pulse);
        if (e.sample) {
            Sample s = measure(rho, e.t, observables, traj.max_top_population);
            const double herm = (rho.matrix() - rho.matrix().adjoint()).cwiseAbs().maxCoeff();
            if (s.trace_err > g.trace || herm > g.hermiticity || s.min_eig < g.min_eigenvalue)
                throw PropagationError(fmt::format("sample at t = {:.6g} fails guards (trace error {:.3e}, "
                                                   "Hermiticity {:.3e}, min eigenvalue {:.3e})",
                                                   e.t, s.trace_err, herm, s.min_eig),
                                       {propagator.total_steps(), e.t, {s.trace_err, herm, s.min_eig}});
            traj.samples.push_back(s);
        }
    }
    return traj;
}

}  // namespace tlscool
