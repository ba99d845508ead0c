// propagator.hpp — Time integration of dρ/dt = Gρ with validity guards

#pragma once

#include "tlscool/dissipation.hpp"
#include "tlscool/quantum_core.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tlscool {

enum class Method { Rk4, DormandPrince };

const char* to_string(Method m);

struct GuardLimits {
    double trace = 1e-7;
    double hermiticity = 1e-7;
    double min_eigenvalue = -1e-6;
};

struct IntegratorConfig {
    Method method = Method::Rk4;
    double dt = 0.01;  // fixed step, or initial step for the adaptive method
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    int guard_interval = 500;
    // Integrate in the frame rotating with diag(H); the off-diagonal part of H
    // stays in the equation with time-dependent phases.
    bool interaction_picture = true;
    // Upper bound on dt times the fastest retained scale: the largest
    // |eigenvalue| of H in the lab frame; in the rotating frame the larger of
    // the largest decay rate and the largest |eigenvalue| of H - diag(H).
    // Only enforced for fixed-step integration.
    double resolution = 0.1;
    GuardLimits guards;

    void validate() const;
};

struct StepReport {
    long steps = 0;
    double time = 0.0;  // local time within the segment
    Validity validity;
};

class PropagationError : public std::runtime_error {
public:
    PropagationError(const std::string& what, StepReport report)
        : std::runtime_error(what), report_(report) {}
    const StepReport& report() const { return report_; }

private:
    StepReport report_;
};

// Integrates one generator repeatedly. Compiles the generator once (merged
// jump operators, sparse effective Hamiltonian) so that many short segments
// are cheap. Not safe for concurrent use; construct one per run.
class Propagator {
public:
    Propagator(const Generator& generator, IntegratorConfig config);
    ~Propagator();
    Propagator(Propagator&&) noexcept;
    Propagator& operator=(Propagator&&) noexcept;

    // ρ(t + duration). Throws PropagationError when a guard trips.
    DensityMatrix advance(const DensityMatrix& rho, double duration);

    const IntegratorConfig& config() const { return config_; }
    long total_steps() const { return total_steps_; }
    // Largest scale entering the resolution check (see IntegratorConfig).
    double stiffness_scale() const;

private:
    struct Kernel;
    std::unique_ptr<Kernel> kernel_;
    IntegratorConfig config_;
    SpaceDims space_;
    long total_steps_ = 0;

    void check_guards(const Matrix& rho, long step, double time) const;
    Matrix advance_rk4(Matrix rho, double duration);
    Matrix advance_adaptive(Matrix rho, double duration);
};

DensityMatrix propagate(const DensityMatrix& rho, const Generator& generator, double duration,
                        const IntegratorConfig& config);

struct ConvergenceReport {
    std::vector<double> dts;     // sorted, coarsest first
    std::vector<double> values;  // end-time observable per dt
    // log2-style observed order from consecutive triples: entry i uses dts i, i+1, i+2.
    std::vector<double> observed_orders;
    // Coarsest dt whose value differs from the next finer one by < tolerance.
    std::optional<double> converged_dt;
    double tolerance = 1e-4;
};

// Runs `run(dt)` for every dt (at least two distinct values) and reports the
// Richardson-style observed order and the converged step.
ConvergenceReport convergence_sweep(const std::function<double(double)>& run, std::vector<double> dt_list,
                                    double tolerance = 1e-4);

}  // namespace tlscool
