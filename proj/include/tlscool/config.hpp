// config.hpp — Run configuration and its flat key = value file format
//
// File format: one `key = value` per line, `#` starts a comment, blank lines
// are ignored. Keys are the RunConfig field names listed in config_keys().
// Unknown or repeated keys are errors.

#pragma once

#include "tlscool/polariton.hpp"
#include "tlscool/propagator.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace tlscool {

enum class Approach { Polariton, Simple };
enum class InitialState { ThermalThermal, ThermalGround };

const char* to_string(Approach a);
const char* to_string(InitialState s);

// How theta = ħω_m/(k_B T) was obtained.
struct Temperature {
    bool theta_given = false;
    double omega_m_hz = 200e6;
    double temperature_k = 0.1;
    bool angular = true;  // ω_m = 2π · omega_m_hz

    std::string describe() const;
};

// ħω/(k_B T) with ω = 2π f when angular is set, ω = f otherwise.
double theta_from_physical(double frequency_hz, bool angular, double temperature_k);

struct RunConfig {
    SystemParams params;
    Temperature temperature;
    int nmax = 80;
    int n_pulses = 0;
    double horizon = 200.0;
    Approach approach = Approach::Polariton;
    IntegratorConfig integrator;
    InitialState initial_state = InitialState::ThermalThermal;
    double sample_every = 1.0;

    void validate() const;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameters of the first figure: ω_z = 0.9, κ = 0.15, γ_m = 1e-6,
// γ_τ = 2.5e-4, g = λ = 0.05, Δ_L = -1, T = 0.1 K at ω_m = 2π·200 MHz.
RunConfig fig1_preset();

const std::vector<std::string>& config_keys();

// Sets one key from its textual value; `where` prefixes error messages.
// Physical temperature keys recompute theta.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value,
                   const std::string& where = "");

// Parses file contents on top of fig1_preset(); validates the result.
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::string& path);

// Flat key = value echo of every field, in config_keys() order.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);

std::string format_number(double v);

}  // namespace tlscool
