// pulse_engine.hpp — Free evolution interleaved with instantaneous σ_z pulses

#pragma once

#include "tlscool/dissipation.hpp"
#include "tlscool/propagator.hpp"
#include "tlscool/quantum_core.hpp"
#include "tlscool/trajectory.hpp"

#include <vector>

namespace tlscool {

class PulseSchedule {
public:
    // Throws std::invalid_argument unless times are strictly increasing and
    // strictly inside (0, horizon).
    PulseSchedule(std::vector<double> times, double horizon);

    int n_pulses() const { return static_cast<int>(times_.size()); }
    double horizon() const { return horizon_; }
    const std::vector<double>& times() const { return times_; }

private:
    std::vector<double> times_;
    double horizon_;
};

// N pulses at t_j = j·horizon/(N+1), j = 1..N.
PulseSchedule uniform_schedule(int n_pulses, double horizon);

inline constexpr const char* kPulseSpacingRule = "t_j = j*horizon/(N+1), j=1..N";

// {0, Δ, 2Δ, ...} with the horizon always included.
std::vector<double> uniform_sampling(double horizon, double every);

// ρ → V ρ V†. Rejects V that is not unitary within 1e-10.
DensityMatrix apply_pulse(const DensityMatrix& rho, const Operator& pulse);

// Operators sampled along a trajectory, all in the generator's basis.
struct Observables {
    Operator n_osc;        // b†b
    Operator tls_excited;  // σ₊σ₋
    Operator top_level;    // projector on Fock level nmax
};

Observables product_observables(const SpaceDims& space);
// Product-basis observables rotated by U (X → U X U†).
Observables rotated_observables(const SpaceDims& space, const Matrix& u);

// Evolves under the generator between pulse instants, conjugating by the pulse
// at each instant. A sampling point that coincides with a pulse records the
// post-pulse state. Samples outside [0, horizon] are rejected.
Trajectory evolve_pulsed(const DensityMatrix& rho0, const Generator& generator, const Operator& pulse,
                         const PulseSchedule& schedule, const std::vector<double>& sampling,
                         const IntegratorConfig& config, const Observables& observables);

}  // namespace tlscool
