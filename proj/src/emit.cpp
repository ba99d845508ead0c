#include "tlscool/emit.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>
#include <set>

namespace tlscool {

namespace {

std::string num(double v) { return fmt::format("{:.10e}", v); }

std::string clean_key(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

const std::string* coord(const GridCoords& coords, const std::string& key) {
    for (const auto& [k, v] : coords)
        if (k == key) return &v;
    return nullptr;
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
    std::string out;
    for (const auto& [k, v] : traj.metadata) out += fmt::format("# {} = {}\n", k, v);
    out += kTrajectoryHeader;
    out += '\n';
    for (const Sample& s : traj.samples)
        out += fmt::format("{},{},{},{},{},{}\n", num(s.t), num(s.n_osc), num(s.tls_excited), num(s.trace_err),
                           num(s.min_eig), num(s.purity));
    return out;
}

std::string row_stem(const GridCoords& coords) {
    if (coords.empty()) return "run";
    std::string out;
    for (const auto& [k, v] : coords) {
        if (!out.empty()) out += "__";
        out += k + '_' + v;
    }
    for (char& c : out)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) c = '_';
    return out;
}

std::string summary_csv(const std::vector<SweepRow>& rows) {
    std::vector<std::string> keys;
    for (const SweepRow& r : rows)
        for (const auto& [k, v] : r.coords)
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);

    std::string out;
    for (const std::string& k : keys) out += k + ',';
    out += "end_n_osc,end_tls_excited,max_top_population,truncation_ok,status,file\n";
    for (const SweepRow& r : rows) {
        for (const std::string& k : keys) {
            const std::string* v = coord(r.coords, k);
            out += (v ? *v : std::string()) + ',';
        }
        if (r.trajectory) {
            out += fmt::format("{},{},{},{},", num(r.end_value), num(r.trajectory->final_sample().tls_excited),
                               num(r.trajectory->max_top_population), r.truncation_ok ? "yes" : "no");
        } else {
            out += ",,,no,";
        }
        out += r.error.empty() ? std::string("ok") : "error: " + clean_key(r.error);
        out += ',' + row_stem(r.coords) + ".csv\n";
    }
    return out;
}

std::string plot_data_csv(const ScenarioResult& result) {
    const bool gamma_scan = result.name == ScenarioName::Fig3a || result.name == ScenarioName::Fig3b;
    std::string out;
    if (gamma_scan) {
        // rows: γ_τ, columns: one per pulse count
        std::vector<std::string> pulses;
        std::map<double, std::map<std::string, double>> table;
        for (const SweepRow& r : result.rows) {
            const std::string* g = coord(r.coords, "gamma_tau");
            const std::string* n = coord(r.coords, "n_pulses");
            if (!g || !n || !r.trajectory) continue;
            if (std::find(pulses.begin(), pulses.end(), *n) == pulses.end()) pulses.push_back(*n);
            table[r.config.params.gamma_tau][*n] = r.end_value;
        }
        out += "gamma_tau";
        for (const std::string& n : pulses) out += ",n_osc_N" + n;
        out += '\n';
        for (const auto& [g, cols] : table) {
            out += num(g);
            for (const std::string& n : pulses) {
                auto it = cols.find(n);
                out += ',' + (it == cols.end() ? std::string() : num(it->second));
            }
            out += '\n';
        }
        return out;
    }

    // time-domain figures: t followed by one ⟨n_osc⟩ column per run
    std::vector<const SweepRow*> runs;
    for (const SweepRow& r : result.rows)
        if (r.trajectory) runs.push_back(&r);
    out += "t_omega_m";
    for (const SweepRow* r : runs) out += ",n_osc[" + clean_key(r->label()) + ']';
    out += '\n';
    if (runs.empty()) return out;
    const std::size_t count = runs.front()->trajectory->samples.size();
    for (const SweepRow* r : runs)
        if (r->trajectory->samples.size() != count)
            throw EmitError("plot data: runs of one scenario have different sampling grids");
    for (std::size_t i = 0; i < count; ++i) {
        out += num(runs.front()->trajectory->samples[i].t);
        for (const SweepRow* r : runs) out += ',' + num(r->trajectory->samples[i].n_osc);
        out += '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw EmitError(fmt::format("cannot create directory '{}': {}", path.parent_path().string(), ec.message()));
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw EmitError(fmt::format("cannot open '{}' for writing: {}", path.string(), std::strerror(errno)));
    out << text;
    out.close();
    if (!out) throw EmitError(fmt::format("write to '{}' failed", path.string()));
}

std::vector<std::filesystem::path> emit_sweep(const std::vector<SweepRow>& rows, const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> written;
    std::set<std::string> stems;
    for (const SweepRow& r : rows) {
        if (!r.trajectory) continue;
        const std::string stem = row_stem(r.coords);
        if (!stems.insert(stem).second) throw EmitError(fmt::format("two runs map to the file name '{}'", stem));
        written.push_back(out_dir / (stem + ".csv"));
        write_text(written.back(), trajectory_csv(*r.trajectory));
    }
    written.push_back(out_dir / "summary.csv");
    write_text(written.back(), summary_csv(rows));
    return written;
}

std::vector<std::filesystem::path> emit_scenario(const ScenarioResult& result, const std::filesystem::path& out_dir) {
    const std::filesystem::path dir = out_dir / to_string(result.name);
    std::vector<std::filesystem::path> written = emit_sweep(result.rows, dir);
    written.push_back(dir / "plot_data.csv");
    write_text(written.back(), plot_data_csv(result));
    return written;
}

}  // namespace tlscool
