#include "support.hpp"

#include "tlscool/dissipation.hpp"
#include "tlscool/oracle.hpp"
#include "tlscool/propagator.hpp"

#include <doctest.h>

#include <cmath>

using namespace tlscool;
using test::max_abs;

namespace {

SystemParams lively() {
    SystemParams p;
    p.gamma_m = 0.03;
    p.gamma_tau = 0.05;
    p.theta = 0.7;
    p.g = 0.2;
    p.kappa = 0.4;
    return p;
}

Generator polariton(const SystemParams& p, int nmax) {
    const PolaritonBasis basis(p, SpaceDims(nmax));
    return build_polariton_generator(basis, build_transition_table(basis, p), p);
}

}  // namespace

TEST_CASE("zero duration returns the input") {
    std::mt19937 rng(1);
    const Generator g = polariton(lively(), 4);
    const DensityMatrix rho = test::random_state(g.space(), rng);
    CHECK(max_abs(propagate(rho, g, 0.0, {}).matrix() - rho.matrix()) == 0.0);
    CHECK_THROWS_AS(propagate(rho, g, -1.0, {}), std::invalid_argument);
}

TEST_CASE("number is conserved by a decoupled unitary generator") {
    SystemParams p;
    p.lambda = 0.0;
    const SpaceDims space(6);
    const Generator g(jc_hamiltonian(p, space), {}, BasisTag::BareProduct);
    std::mt19937 rng(2);
    const DensityMatrix rho = test::random_state(space, rng);
    const Operator n = build_ladder(space).adjoint() * build_ladder(space);
    for (bool ip : {false, true}) {
        IntegratorConfig cfg;
        cfg.interaction_picture = ip;
        cfg.dt = 0.01;
        const DensityMatrix out = propagate(rho, g, 7.3, cfg);
        CHECK(std::abs(expectation(out, n).real() - expectation(rho, n).real()) < 1e-9);
    }
}

TEST_CASE("propagation matches the matrix exponential at nmax = 2") {
    std::mt19937 rng(3);
    const SpaceDims space(2);
    const SystemParams p = lively();
    const PolaritonBasis basis(p, space);
    for (const Generator& g : {polariton(p, 2), build_simple_generator(p, space)}) {
        const DensityMatrix rho = test::random_state(space, rng);
        const Matrix exact = oracle::expm_evolve(oracle::build_superoperator(g), rho.matrix(), 1.0);
        for (Method m : {Method::Rk4, Method::DormandPrince}) {
          for (bool ip : {false, true}) {
            IntegratorConfig cfg;
            cfg.interaction_picture = ip;
            cfg.method = m;
            cfg.dt = 0.01;
            cfg.rel_tol = 1e-11;
            cfg.abs_tol = 1e-13;
            CHECK(max_abs(propagate(rho, g, 1.0, cfg).matrix() - exact) < 1e-8);
          }
        }
    }
}

TEST_CASE("interaction picture and lab frame agree") {
    std::mt19937 rng(4);
    const SystemParams p = lively();
    const SpaceDims space(6);
    const PolaritonBasis basis(p, space);
    const Generator bare = build_simple_generator(p, space);
    // diagonal H, off-diagonal H with narrow jumps, and a rotated model with wide jumps
    for (const Generator& g : {polariton(p, 6), bare, bare.in_basis(basis.transform(), BasisTag::Polariton)}) {
        const DensityMatrix rho = test::random_state(g.space(), rng);
        IntegratorConfig lab;
        lab.interaction_picture = false;
        lab.dt = 0.004;
        IntegratorConfig rot;
        rot.dt = 0.01;
        CHECK(max_abs(propagate(rho, g, 3.0, lab).matrix() - propagate(rho, g, 3.0, rot).matrix()) < 1e-9);
    }
}

TEST_CASE("segments compose") {
    std::mt19937 rng(5);
    const Generator g = polariton(lively(), 5);
    const DensityMatrix rho = test::random_state(g.space(), rng);
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    Propagator prop(g, cfg);
    const DensityMatrix split = prop.advance(prop.advance(rho, 1.25), 0.75);
    CHECK(max_abs(split.matrix() - propagate(rho, g, 2.0, cfg).matrix()) < 1e-11);
    CHECK(prop.total_steps() == 200);
}

TEST_CASE("RK4 is fourth order") {
    std::mt19937 rng(6);
    const SpaceDims space(2);
    const Generator g = build_simple_generator(lively(), space);
    const DensityMatrix rho = test::random_state(space, rng);
    const Matrix exact = oracle::expm_evolve(oracle::build_superoperator(g), rho.matrix(), 2.0);
    auto error = [&](double dt) {
        IntegratorConfig cfg;
        cfg.interaction_picture = false;
        cfg.dt = dt;
        return max_abs(propagate(rho, g, 2.0, cfg).matrix() - exact);
    };
    const double ratio = error(0.03) / error(0.015);
    CHECK(ratio == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("convergence sweep") {
    std::mt19937 rng(7);
    const SpaceDims space(2);
    const Generator g = build_simple_generator(lively(), space);
    const DensityMatrix rho = test::random_state(space, rng);
    const Operator n = build_ladder(space).adjoint() * build_ladder(space);
    auto run = [&](double dt) {
        IntegratorConfig cfg;
        cfg.interaction_picture = false;
        cfg.dt = dt;
        return expectation(propagate(rho, g, 2.0, cfg), n).real();
    };
    const ConvergenceReport r = convergence_sweep(run, {0.005, 0.04, 0.02, 0.01});
    REQUIRE(r.dts.size() == 4);
    CHECK(r.dts.front() == 0.04);
    REQUIRE(r.observed_orders.size() == 2);
    CHECK(r.observed_orders[0] == doctest::Approx(4.0).epsilon(0.1));
    REQUIRE(r.converged_dt);
    CHECK(*r.converged_dt == 0.04);
    CHECK_THROWS_AS(convergence_sweep(run, {0.01}), std::invalid_argument);
    CHECK_THROWS_AS(convergence_sweep(run, {0.01, 0.01}), std::invalid_argument);
}

TEST_CASE("guards and configuration checks") {
    std::mt19937 rng(8);
    const Generator g = polariton(lively(), 4);
    const DensityMatrix rho = test::random_state(g.space(), rng);

    IntegratorConfig tight;
    tight.guards.trace = 0.0;
    tight.guard_interval = 1;
    try {
        propagate(rho, g, 1.0, tight);
        FAIL("expected a guard failure");
    } catch (const PropagationError& e) {
        CHECK(e.report().steps >= 1);
    }

    IntegratorConfig coarse;
    coarse.interaction_picture = false;
    coarse.dt = 1.0;  // |E|·dt far beyond the resolution limit
    CHECK_THROWS_AS(Propagator(g, coarse), std::invalid_argument);

    IntegratorConfig bad;
    bad.dt = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
