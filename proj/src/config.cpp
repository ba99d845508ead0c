#include "tlscool/config.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace tlscool {

namespace {

// CODATA 2018 exact values.
constexpr double kHbar = 1.054571817e-34;
constexpr double kBoltzmann = 1.380649e-23;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string prefix(const std::string& where, const std::string& key) {
    return where.empty() ? fmt::format("'{}'", key) : fmt::format("{}: '{}'", where, key);
}

double parse_double(const std::string& key, const std::string& value, const std::string& where) {
    double out = 0.0;
    const char* first = value.data();
    const char* last = first + value.size();
    if (!value.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || !std::isfinite(out))
        throw ConfigError(fmt::format("{}: expected a number, got '{}'", prefix(where, key), value));
    return out;
}

int parse_int(const std::string& key, const std::string& value, const std::string& where) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError(fmt::format("{}: expected an integer, got '{}'", prefix(where, key), value));
    return out;
}

bool parse_bool(const std::string& key, const std::string& value, const std::string& where) {
    const std::string v = lower(value);
    if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
    if (v == "off" || v == "false" || v == "no" || v == "0") return false;
    throw ConfigError(fmt::format("{}: expected on/off, got '{}'", prefix(where, key), value));
}

void refresh_theta(RunConfig& c) {
    if (!c.temperature.theta_given)
        c.params.theta =
            theta_from_physical(c.temperature.omega_m_hz, c.temperature.angular, c.temperature.temperature_k);
}

}  // namespace

const char* to_string(Approach a) { return a == Approach::Polariton ? "polariton" : "simple"; }

const char* to_string(InitialState s) {
    return s == InitialState::ThermalThermal ? "thermal-thermal" : "thermal-ground";
}

double theta_from_physical(double frequency_hz, bool angular, double temperature_k) {
    if (!(frequency_hz > 0.0)) throw ConfigError(fmt::format("omega_m_hz must be > 0, got {}", frequency_hz));
    if (!(temperature_k > 0.0)) throw ConfigError(fmt::format("temperature_k must be > 0, got {}", temperature_k));
    const double omega = angular ? 2.0 * std::numbers::pi * frequency_hz : frequency_hz;
    return kHbar * omega / (kBoltzmann * temperature_k);
}

std::string Temperature::describe() const {
    if (theta_given) return "theta given directly";
    return fmt::format("omega_m = {}{} Hz, T = {} K", angular ? "2*pi*" : "", format_number(omega_m_hz),
                       format_number(temperature_k));
}

std::string format_number(double v) { return fmt::format("{:.12g}", v); }

void RunConfig::validate() const {
    try {
        params.validate();
        integrator.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (nmax < 2) throw ConfigError(fmt::format("nmax must be >= 2, got {}", nmax));
    if (n_pulses < 0) throw ConfigError(fmt::format("n_pulses must be >= 0, got {}", n_pulses));
    if (!(horizon > 0.0)) throw ConfigError(fmt::format("horizon must be > 0, got {}", horizon));
    if (!(sample_every > 0.0)) throw ConfigError(fmt::format("sample_every must be > 0, got {}", sample_every));
}

RunConfig fig1_preset() {
    RunConfig c;
    c.params.omega_z = 0.9;
    c.params.kappa = 0.15;
    c.params.gamma_m = 1e-6;
    c.params.gamma_tau = 2.5e-4;
    c.params.g = 0.05;
    c.params.lambda = 0.05;
    c.params.delta_l = -1.0;
    c.temperature = Temperature{};
    refresh_theta(c);
    return c;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "omega_z",     "lambda",        "g",           "kappa",        "gamma_m",
        "gamma_tau",   "delta_l",       "delta_b",     "theta",        "omega_m_hz",
        "temperature_k", "angular_convention", "nmax", "n_pulses",     "horizon",
        "approach",    "initial_state", "sample_every", "integrator",  "dt",
        "rel_tol",     "abs_tol",       "guard_interval", "interaction_picture"};
    return keys;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& raw, const std::string& where) {
    const std::string value = trim(raw);
    auto num = [&] { return parse_double(key, value, where); };
    SystemParams& p = c.params;

    if (key == "omega_z") p.omega_z = num();
    else if (key == "lambda") p.lambda = num();
    else if (key == "g") p.g = num();
    else if (key == "kappa") p.kappa = num();
    else if (key == "gamma_m") p.gamma_m = num();
    else if (key == "gamma_tau") p.gamma_tau = num();
    else if (key == "delta_l") p.delta_l = num();
    else if (key == "delta_b") {
        if (lower(value) == "delta_l") p.delta_b.reset();
        else p.delta_b = num();
    } else if (key == "theta") {
        p.theta = num();
        c.temperature.theta_given = true;
    } else if (key == "omega_m_hz") {
        c.temperature.omega_m_hz = num();
        c.temperature.theta_given = false;
        refresh_theta(c);
    } else if (key == "temperature_k") {
        c.temperature.temperature_k = num();
        c.temperature.theta_given = false;
        refresh_theta(c);
    } else if (key == "angular_convention") {
        if (c.temperature.theta_given)
            throw ConfigError(fmt::format("{}: cannot apply when theta is given directly", prefix(where, key)));
        c.temperature.angular = parse_bool(key, value, where);
        refresh_theta(c);
    } else if (key == "nmax") c.nmax = parse_int(key, value, where);
    else if (key == "n_pulses") c.n_pulses = parse_int(key, value, where);
    else if (key == "horizon") c.horizon = num();
    else if (key == "sample_every") c.sample_every = num();
    else if (key == "approach") {
        const std::string v = lower(value);
        if (v == "polariton") c.approach = Approach::Polariton;
        else if (v == "simple") c.approach = Approach::Simple;
        else throw ConfigError(fmt::format("{}: expected polariton|simple, got '{}'", prefix(where, key), value));
    } else if (key == "initial_state") {
        const std::string v = lower(value);
        if (v == "thermal-thermal") c.initial_state = InitialState::ThermalThermal;
        else if (v == "thermal-ground") c.initial_state = InitialState::ThermalGround;
        else
            throw ConfigError(
                fmt::format("{}: expected thermal-thermal|thermal-ground, got '{}'", prefix(where, key), value));
    } else if (key == "integrator") {
        const std::string v = lower(value);
        if (v == "rk4") c.integrator.method = Method::Rk4;
        else if (v == "dopri5" || v == "adaptive") c.integrator.method = Method::DormandPrince;
        else throw ConfigError(fmt::format("{}: expected rk4|dopri5, got '{}'", prefix(where, key), value));
    } else if (key == "dt") c.integrator.dt = num();
    else if (key == "rel_tol") c.integrator.rel_tol = num();
    else if (key == "abs_tol") c.integrator.abs_tol = num();
    else if (key == "guard_interval") c.integrator.guard_interval = parse_int(key, value, where);
    else if (key == "interaction_picture") c.integrator.interaction_picture = parse_bool(key, value, where);
    else throw ConfigError(fmt::format("{}: unknown key", prefix(where, key)));
}

RunConfig parse_config(const std::string& text, const std::string& source) {
    RunConfig c = fig1_preset();
    std::istringstream in(text);
    std::string line;
    std::set<std::string> seen;
    bool theta_key = false;
    bool physical_key = false;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = fmt::format("{}:{}", source, lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("{}: expected 'key = value'", where));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(fmt::format("{}: missing key", where));
        if (value.empty()) throw ConfigError(fmt::format("{}: '{}' has no value", where, key));
        if (!seen.insert(key).second) throw ConfigError(fmt::format("{}: '{}' given twice", where, key));
        if (key == "theta") theta_key = true;
        if (key == "omega_m_hz" || key == "temperature_k" || key == "angular_convention") physical_key = true;
        if (theta_key && physical_key)
            throw ConfigError(fmt::format("{}: give either theta or omega_m_hz/temperature_k/angular_convention", where));
        apply_setting(c, key, value, where);
    }
    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", source, e.what()));
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path);
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c) {
    const SystemParams& p = c.params;
    const IntegratorConfig& ic = c.integrator;
    return {
        {"omega_z", format_number(p.omega_z)},
        {"lambda", format_number(p.lambda)},
        {"g", format_number(p.g)},
        {"kappa", format_number(p.kappa)},
        {"gamma_m", format_number(p.gamma_m)},
        {"gamma_tau", format_number(p.gamma_tau)},
        {"delta_l", format_number(p.delta_l)},
        {"delta_b", p.delta_b ? format_number(*p.delta_b) : std::string("delta_l")},
        {"theta", format_number(p.theta)},
        {"omega_m_hz", c.temperature.theta_given ? "-" : format_number(c.temperature.omega_m_hz)},
        {"temperature_k", c.temperature.theta_given ? "-" : format_number(c.temperature.temperature_k)},
        {"angular_convention", c.temperature.theta_given ? "-" : (c.temperature.angular ? "on" : "off")},
        {"nmax", std::to_string(c.nmax)},
        {"n_pulses", std::to_string(c.n_pulses)},
        {"horizon", format_number(c.horizon)},
        {"approach", to_string(c.approach)},
        {"initial_state", to_string(c.initial_state)},
        {"sample_every", format_number(c.sample_every)},
        {"integrator", to_string(ic.method)},
        {"dt", format_number(ic.dt)},
        {"rel_tol", format_number(ic.rel_tol)},
        {"abs_tol", format_number(ic.abs_tol)},
        {"guard_interval", std::to_string(ic.guard_interval)},
        {"interaction_picture", ic.interaction_picture ? "on" : "off"},
    };
}

}  // namespace tlscool
