// trajectory.hpp — Sampled observables of one run plus its metadata

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tlscool {

struct Sample {
    double t = 0.0;  // in units of 1/ω_m
    double n_osc = 0.0;
    double tls_excited = 0.0;
    double trace_err = 0.0;
    double min_eig = 0.0;
    double purity = 0.0;
};

// Populations of the top Fock level above this fail the truncation check.
inline constexpr double kTruncationLimit = 1e-4;

struct Trajectory {
    // Ordered key/value pairs echoed into output files.
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<Sample> samples;
    double max_top_population = 0.0;

    bool truncation_ok() const { return max_top_population <= kTruncationLimit; }
    const Sample& final_sample() const { return samples.back(); }
    double end_value() const { return samples.back().n_osc; }

    void set_meta(const std::string& key, const std::string& value);
    const std::string* meta(const std::string& key) const;
};

}  // namespace tlscool
