#include "support.hpp"

#include "tlscool/config.hpp"
#include "tlscool/dissipation.hpp"
#include "tlscool/emit.hpp"
#include "tlscool/scenarios.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tlscool;
namespace fs = std::filesystem;

namespace {

// A configuration small enough to run in milliseconds.
RunConfig tiny() {
    RunConfig c = fig1_preset();
    c.nmax = 4;
    c.horizon = 4.0;
    c.sample_every = 1.0;
    c.params.theta = 3.0;
    c.temperature.theta_given = true;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("tlscool_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("physical temperature conversion") {
    const double theta = theta_from_physical(200e6, true, 0.1);
    CHECK(theta == doctest::Approx(0.09597).epsilon(1e-4));
    CHECK(bose_occupation(1.0, theta) == doctest::Approx(9.9263).epsilon(1e-4));
    CHECK(theta_from_physical(200e6, false, 0.1) == doctest::Approx(theta / (2.0 * M_PI)));
    CHECK_THROWS_AS(theta_from_physical(200e6, true, 0.0), ConfigError);
}

TEST_CASE("first-figure preset file") {
    const RunConfig c = load_config(std::string(TLSCOOL_SOURCE_DIR) + "/configs/fig1a.conf");
    CHECK(c.params.omega_z == 0.9);
    CHECK(c.params.kappa == 0.15);
    CHECK(c.params.gamma_m == 1e-6);
    CHECK(c.params.gamma_tau == 2.5e-4);
    CHECK(c.params.g == 0.05);
    CHECK(c.params.lambda == 0.05);
    CHECK(c.params.delta_l == -1.0);
    CHECK(c.params.theta == doctest::Approx(theta_from_physical(200e6, true, 0.1)));
    CHECK(c.approach == Approach::Polariton);
    CHECK(c.nmax == 80);
    CHECK(load_config(std::string(TLSCOOL_SOURCE_DIR) + "/configs/fig1b.conf").approach == Approach::Simple);
}

TEST_CASE("config parsing") {
    SUBCASE("comments, blanks, whitespace") {
        const RunConfig c = parse_config("# c\n\n  nmax = 12  # trailing\ngamma_tau=1e-5\ndelta_b = -0.9\n");
        CHECK(c.nmax == 12);
        CHECK(c.params.gamma_tau == 1e-5);
        CHECK(c.params.delta_b == -0.9);
    }
    SUBCASE("theta given directly") {
        const RunConfig c = parse_config("theta = 0.5\n");
        CHECK(c.params.theta == 0.5);
        CHECK(c.temperature.theta_given);
    }
    SUBCASE("angular convention switch") {
        const RunConfig c = parse_config("angular_convention = off\n");
        CHECK(bose_occupation(1.0, c.params.theta) == doctest::Approx(65.0).epsilon(0.01));
    }
    SUBCASE("rejections name the problem") {
        auto message = [](const std::string& text) {
            try {
                parse_config(text, "cfg");
            } catch (const ConfigError& e) {
                return std::string(e.what());
            }
            return std::string("accepted");
        };
        CHECK(message("gamma_tau = -1e-4\n").find("gamma_tau") != std::string::npos);
        CHECK(message("bogus = 1\n").find("cfg:1: 'bogus': unknown key") != std::string::npos);
        CHECK(message("nmax = 10\nnmax = 12\n").find("given twice") != std::string::npos);
        CHECK(message("nmax\n").find("cfg:1") != std::string::npos);
        CHECK(message("nmax =\n").find("no value") != std::string::npos);
        CHECK(message("nmax = ten\n").find("expected an integer") != std::string::npos);
        CHECK(message("theta = 0.1\ntemperature_k = 0.2\n").find("either theta") != std::string::npos);
        CHECK(message("horizon = 0\n").find("horizon") != std::string::npos);
        CHECK(message("approach = fancy\n").find("polariton|simple") != std::string::npos);
        CHECK(message("nmax = 1\n").find("nmax") != std::string::npos);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/x.conf"), ConfigError);
}

TEST_CASE("describe echoes every key") {
    const auto echo = describe(fig1_preset());
    REQUIRE(echo.size() == config_keys().size());
    for (std::size_t k = 0; k < echo.size(); ++k) CHECK(echo[k].first == config_keys()[k]);
    // the echo parses back to the same configuration
    std::string text;
    for (const auto& [k, v] : echo)
        if (v != "-" && k != "theta") text += k + " = " + v + "\n";
    const auto again = describe(parse_config(text));
    CHECK(again == echo);
}

TEST_CASE("single runs carry the conventions ledger") {
    const Trajectory t = run_single(tiny());
    for (const char* key : {"code_version", "convention.delta_b", "convention.pulse_spacing",
                            "convention.initial_state", "convention.tensor_ordering", "convention.frequency",
                            "omega_z", "nmax", "truncation_ok"})
        CHECK_MESSAGE(t.meta(key) != nullptr, key);
    CHECK(*t.meta("convention.delta_b") == "delta_b = delta_l");
    CHECK(t.samples.size() == 5);
    CHECK(t.samples.back().t == 4.0);
}

TEST_CASE("both approaches start from the same state") {
    RunConfig a = tiny();
    RunConfig b = a;
    b.approach = Approach::Simple;
    RunConfig c = b;
    c.integrator.interaction_picture = false;
    c.integrator.dt = 0.01;
    const Trajectory ta = run_single(a), tb = run_single(b), tc = run_single(c);
    CHECK(ta.samples[0].n_osc == doctest::Approx(tb.samples[0].n_osc).epsilon(1e-12));
    CHECK(ta.samples[0].tls_excited == doctest::Approx(tb.samples[0].tls_excited).epsilon(1e-12));
    // rotated-frame and bare-frame integration of the simple model agree
    CHECK(tb.end_value() == doctest::Approx(tc.end_value()).epsilon(1e-8));
}

TEST_CASE("sweeps") {
    set_warnings_enabled(false);
    SUBCASE("one-point grid equals a single run") {
        const auto rows = sweep({{"n_pulses", {"3"}}}, tiny());
        REQUIRE(rows.size() == 1);
        RunConfig c = tiny();
        c.n_pulses = 3;
        CHECK(rows[0].end_value == run_single(c).end_value());
        CHECK(rows[0].ok());
    }
    SUBCASE("cartesian order, duplicates dropped") {
        const auto rows = sweep({{"gamma_tau", {"1e-4", "1e-3", "1e-4"}}, {"n_pulses", {"0", "5"}}}, tiny(), {2});
        REQUIRE(rows.size() == 4);
        CHECK(rows[0].label() == "gamma_tau=1e-4,n_pulses=0");
        CHECK(rows[1].label() == "gamma_tau=1e-4,n_pulses=5");
        CHECK(rows[3].label() == "gamma_tau=1e-3,n_pulses=5");
        CHECK(rows[3].config.params.gamma_tau == 1e-3);
    }
    SUBCASE("a failing point is recorded, not fatal") {
        const auto rows = sweep({{"gamma_tau", {"1e-4", "-1"}}}, tiny());
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].ok());
        CHECK_FALSE(rows[1].ok());
        CHECK(rows[1].error.find("gamma_tau") != std::string::npos);
    }
    SUBCASE("threaded results equal serial results") {
        const std::vector<GridAxis> grid{{"n_pulses", {"0", "1", "2", "3"}}};
        const auto serial = sweep(grid, tiny(), {1});
        const auto threaded = sweep(grid, tiny(), {3});
        for (std::size_t k = 0; k < serial.size(); ++k) CHECK(serial[k].end_value == threaded[k].end_value);
    }
    SUBCASE("convergence check records dt") {
        SweepOptions o;
        o.check_convergence = true;
        const auto rows = sweep({{"n_pulses", {"2"}}}, tiny(), o);
        CHECK(rows[0].ok());
        REQUIRE(rows[0].trajectory->meta("converged_dt"));
        CHECK(*rows[0].trajectory->meta("converged_dt") == "0.01");
    }
    set_warnings_enabled(true);
}

TEST_CASE("scenario definitions") {
    CHECK(parse_scenario("fig3b") == ScenarioName::Fig3b);
    CHECK_FALSE(parse_scenario("fig4"));
    CHECK(scenario_grid(ScenarioName::Fig1a)[0].values == std::vector<std::string>{"0", "9", "19", "49", "99"});
    const auto fig2 = scenario_grid(ScenarioName::Fig2);
    CHECK(fig2[0].key == "omega_z");
    CHECK(fig2[1].values == std::vector<std::string>{"0", "99", "199"});
    CHECK(scenario_base(ScenarioName::Fig1b, fig1_preset()).approach == Approach::Simple);
    CHECK(scenario_base(ScenarioName::Fig3a, fig1_preset()).params.omega_z == 0.95);
    CHECK(scenario_base(ScenarioName::Fig3b, fig1_preset()).params.omega_z == 0.6);
    CHECK(gamma_tau_grid().front() == 1e-6);
}

TEST_CASE("emitted files") {
    RunConfig c = tiny();
    ScenarioResult result{ScenarioName::Fig1a, sweep({{"n_pulses", {"0", "3"}}}, c)};
    const fs::path a = scratch("a"), b = scratch("b");
    const auto files = emit_scenario(result, a);
    CHECK(files.size() == 4);

    const std::string csv = slurp(a / "fig1a" / "n_pulses_3.csv");
    std::istringstream lines(csv);
    std::string line;
    bool header_seen = false;
    int data = 0;
    while (std::getline(lines, line)) {
        if (!header_seen) {
            if (line == kTrajectoryHeader) header_seen = true;
            else CHECK(line.rfind("# ", 0) == 0);
        } else {
            ++data;
        }
    }
    CHECK(header_seen);
    CHECK(data == 5);
    CHECK(csv.find("# convention.pulse_spacing = ") != std::string::npos);

    const std::string summary = slurp(a / "fig1a" / "summary.csv");
    CHECK(summary.rfind("n_pulses,end_n_osc,", 0) == 0);
    CHECK(slurp(a / "fig1a" / "plot_data.csv").rfind("t_omega_m,n_osc[n_pulses=0],n_osc[n_pulses=3]\n", 0) == 0);

    // rerun from scratch: byte-identical
    ScenarioResult again{ScenarioName::Fig1a, sweep({{"n_pulses", {"0", "3"}}}, c, {2})};
    emit_scenario(again, b);
    for (const char* f : {"n_pulses_0.csv", "n_pulses_3.csv", "summary.csv", "plot_data.csv"})
        CHECK_MESSAGE(slurp(a / "fig1a" / f) == slurp(b / "fig1a" / f), f);

    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("gamma scans are pivoted for plotting") {
    RunConfig c = scenario_base(ScenarioName::Fig3a, tiny());
    ScenarioResult r{ScenarioName::Fig3a, sweep({{"gamma_tau", {"1e-5", "1e-4"}}, {"n_pulses", {"0", "3"}}}, c)};
    const std::string plot = plot_data_csv(r);
    CHECK(plot.rfind("gamma_tau,n_osc_N0,n_osc_N3\n", 0) == 0);
    CHECK(std::count(plot.begin(), plot.end(), '\n') == 3);
}

TEST_CASE("I/O failures name the path") {
    try {
        write_text("/proc/nope/x.csv", "x");
        FAIL("expected an error");
    } catch (const EmitError& e) {
        CHECK(std::string(e.what()).find("/proc/nope") != std::string::npos);
    }
}
