#include "support.hpp"

#include "tlscool/dissipation.hpp"
#include "tlscool/pulse_engine.hpp"

#include <doctest.h>

#include <cmath>

using namespace tlscool;
using test::max_abs;

TEST_CASE("uniform schedule") {
    CHECK(uniform_schedule(0, 200.0).times().empty());
    const PulseSchedule one = uniform_schedule(1, 200.0);
    REQUIRE(one.n_pulses() == 1);
    CHECK(one.times()[0] == 100.0);
    const PulseSchedule many = uniform_schedule(99, 200.0);
    REQUIRE(many.n_pulses() == 99);
    for (int j = 1; j < 99; ++j) CHECK(many.times()[j] - many.times()[j - 1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(many.times().front() == 2.0);
    CHECK_THROWS_AS(uniform_schedule(-1, 200.0), std::invalid_argument);
}

TEST_CASE("schedule validation") {
    CHECK_THROWS_AS(PulseSchedule({0.0}, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(PulseSchedule({10.0}, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(PulseSchedule({3.0, 2.0}, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(PulseSchedule({2.0, 2.0}, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(PulseSchedule({}, 0.0), std::invalid_argument);
}

TEST_CASE("uniform sampling always ends at the horizon") {
    const std::vector<double> s = uniform_sampling(10.0, 3.0);
    CHECK(s == std::vector<double>{0.0, 3.0, 6.0, 9.0, 10.0});
    const std::vector<double> exact = uniform_sampling(200.0, 1.0);
    CHECK(exact.size() == 201);
    CHECK(exact.back() == 200.0);
}

TEST_CASE("pulse conjugation") {
    const SpaceDims space(4);
    std::mt19937 rng(1);
    const DensityMatrix rho = test::random_state(space, rng);
    const TlsOperators tls = build_tls_ops(space);
    const Operator n = build_ladder(space).adjoint() * build_ladder(space);

    const DensityMatrix once = apply_pulse(rho, tls.sigma_z);
    CHECK(max_abs(apply_pulse(once, tls.sigma_z).matrix() - rho.matrix()) < 1e-13);
    CHECK(std::abs(expectation(once, n) - expectation(rho, n)) < 1e-14);
    CHECK(std::abs(expectation(once, tls.sigma_minus) + expectation(rho, tls.sigma_minus)) < 1e-14);
    CHECK(std::abs(once.purity() - rho.purity()) < 1e-14);

    Eigen::SelfAdjointEigenSolver<Matrix> a(rho.matrix()), b(once.matrix());
    CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-14);

    const Operator not_unitary{2.0 * tls.sigma_z.matrix, space};
    CHECK_THROWS_AS(apply_pulse(rho, not_unitary), std::invalid_argument);
}

TEST_CASE("polariton pulse equals the product pulse in the rotated frame") {
    const SystemParams p;
    const SpaceDims space(6);
    const PolaritonBasis basis(p, space);
    std::mt19937 rng(2);
    const DensityMatrix rho = test::random_state(space, rng);
    const Matrix lhs = apply_pulse(DensityMatrix(basis.to_polariton(rho.matrix()), space), pulse_matrix(basis)).matrix();
    const Matrix rhs = basis.to_polariton(apply_pulse(rho, build_tls_ops(space).sigma_z).matrix());
    CHECK(max_abs(lhs - rhs) < 1e-13);
}

namespace {

Generator polariton(const SystemParams& p, const SpaceDims& space) {
    const PolaritonBasis basis(p, space);
    return build_polariton_generator(basis, build_transition_table(basis, p), p);
}

}  // namespace

TEST_CASE("empty schedule is plain evolution") {
    SystemParams p;
    p.gamma_tau = 0.01;
    p.gamma_m = 0.01;
    const SpaceDims space(5);
    const PolaritonBasis basis(p, space);
    const Generator g = polariton(p, space);
    std::mt19937 rng(3);
    const DensityMatrix rho = test::random_state(space, rng);
    IntegratorConfig cfg;
    const Observables obs = rotated_observables(space, basis.transform());
    const Trajectory traj =
        evolve_pulsed(rho, g, pulse_matrix(basis), uniform_schedule(0, 4.0), uniform_sampling(4.0, 1.0), cfg, obs);
    REQUIRE(traj.samples.size() == 5);
    const DensityMatrix plain = propagate(rho, g, 4.0, cfg);
    CHECK(traj.end_value() == doctest::Approx(expectation(plain, obs.n_osc).real()).epsilon(1e-12));
    for (std::size_t k = 1; k < traj.samples.size(); ++k) CHECK(traj.samples[k].t > traj.samples[k - 1].t);
}

TEST_CASE("zero rates and no exchange keep the phonon number constant under pulses") {
    SystemParams p;
    p.lambda = 0.0;
    p.g = p.gamma_m = p.gamma_tau = 0.0;
    const SpaceDims space(5);
    const PolaritonBasis basis(p, space);
    std::mt19937 rng(4);
    const DensityMatrix rho = test::random_state(space, rng);
    const Observables obs = rotated_observables(space, basis.transform());
    const double n0 = expectation(rho, obs.n_osc).real();
    const Trajectory traj = evolve_pulsed(rho, polariton(p, space), pulse_matrix(basis), uniform_schedule(7, 10.0),
                                          uniform_sampling(10.0, 0.5), {}, obs);
    for (const Sample& s : traj.samples) CHECK(s.n_osc == doctest::Approx(n0).epsilon(1e-12));
}

TEST_CASE("a sample coinciding with a pulse records the post-pulse state") {
    const SpaceDims space(3);
    const SystemParams p;
    const Generator g = build_simple_generator(p, space);
    const TlsOperators tls = build_tls_ops(space);
    // state with a TLS coherence, so ⟨σ₋⟩ is visible to the pulse
    Matrix psi = Matrix::Zero(space.dim(), 1);
    psi(space.index(1, TlsLevel::Down)) = std::sqrt(0.5);
    psi(space.index(1, TlsLevel::Up)) = std::sqrt(0.5);
    const DensityMatrix rho(psi * psi.adjoint(), space);
    const Observables obs{tls.sigma_minus, tls.sigma_plus * tls.sigma_minus, top_level_projector(space)};
    IntegratorConfig cfg;
    cfg.interaction_picture = false;
    cfg.dt = 0.01;
    const Trajectory pulsed = evolve_pulsed(rho, g, tls.sigma_z, PulseSchedule({1.0}, 2.0), {1.0, 2.0}, cfg, obs);
    const Trajectory free = evolve_pulsed(rho, g, tls.sigma_z, PulseSchedule({}, 2.0), {1.0, 2.0}, cfg, obs);
    // n_osc slot holds Re⟨σ₋⟩ here
    CHECK(pulsed.samples[0].n_osc == doctest::Approx(-free.samples[0].n_osc).epsilon(1e-12));
    CHECK_THROWS_AS(evolve_pulsed(rho, g, tls.sigma_z, PulseSchedule({}, 2.0), {3.0}, cfg, obs), std::invalid_argument);
}

TEST_CASE("first-order decoupling: pulses suppress the TLS bath's imprint on the resonator") {
    // γ_m = g = 0: the resonator only feels γ_τ through the exchange coupling.
    SystemParams p;
    p.g = 0.0;
    p.gamma_m = 0.0;
    p.lambda = 0.05;
    p.omega_z = 0.9;
    p.theta = 1.0;
    const SpaceDims space(10);
    const PolaritonBasis basis(p, space);
    const DensityMatrix rho0 =
        thermal_resonator_state(space, bose_occupation(1.0, p.theta), tls_ground_factor());
    const Observables obs = product_observables(space);
    const double horizon = 50.0;
    IntegratorConfig cfg;
    cfg.interaction_picture = false;
    cfg.dt = 0.008;

    auto run = [&](double gamma_tau, int n) {
        SystemParams q = p;
        q.gamma_tau = gamma_tau;
        return evolve_pulsed(rho0, build_simple_generator(q, space), build_tls_ops(space).sigma_z,
                             uniform_schedule(n, horizon), uniform_sampling(horizon, 0.25), cfg, obs);
    };
    double previous = INFINITY;
    for (int n : {9, 19, 49, 99, 199}) {
        const Trajectory lossy = run(0.02, n);
        const Trajectory ideal = run(0.0, n);
        double distance = 0.0;
        for (std::size_t k = 0; k < lossy.samples.size(); ++k)
            distance = std::max(distance, std::abs(lossy.samples[k].n_osc - ideal.samples[k].n_osc));
        INFO("N = " << n << ", distance " << distance);
        CHECK(distance < previous);
        previous = distance;
    }
}
