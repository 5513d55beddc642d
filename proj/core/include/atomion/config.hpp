#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "atomion/observables.hpp"
#include "atomion/potentials.hpp"

namespace atomion {

// Sections of key=value pairs; '#' and ';' start comments.
struct Ini {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& sec, const std::string& key) const;
    std::string get(const std::string& sec, const std::string& key, std::string fallback) const;
    double get_num(const std::string& sec, const std::string& key, double fallback) const;
    bool get_bool(const std::string& sec, const std::string& key, bool fallback) const;
};

Ini parse_ini(const std::string& text, const std::string& origin = "<string>");
Ini parse_ini_file(const std::string& path);

struct ScanGrid {
    double e_min_K = 1e-8;
    double e_max_K = 1e-1;
    int points_per_decade = 120;
    std::vector<double> energies() const; // ascending, log-spaced
};

struct RunConfig {
    SurfaceSpec surface;
    Entrance entrance = Entrance::D52;
    ScanGrid scan;
    std::vector<Process> processes = {Process::FSQ, Process::NRQ, Process::NRCE};
    std::string j_max_policy = "auto"; // auto | fixed
    int j_max_fixed = 12;
    int j_margin = 8;
    int j_cap = 80;
    bool parity_plus = true, parity_minus = true;
    bool divide_entrance_degeneracy = false;
    PropagationSettings prop;
    double thermal_t_min_K = 3e-6;
    double thermal_t_max_K = 1e-3;
    int thermal_points_per_decade = 12;
    LangevinAverage langevin_average_kind = LangevinAverage::capped;
    std::string out_dir = "out";
    int workers = 1;

    XsecSettings xsec_settings() const;
};

RunConfig parse_run_config(const Ini& ini);
RunConfig load_run_config(const std::string& path);

// Canonical serialization (sorted keys, fixed float format); its FNV-1a hash
// is embedded in every output file.
std::string canonical_config(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);
std::string config_hash_hex(const RunConfig& cfg);

} // namespace atomion
