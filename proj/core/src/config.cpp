#include "atomion/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "atomion/errors.hpp"

namespace atomion {

namespace {

std::string trim(const std::string& s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

} // namespace

bool Ini::has(const std::string& sec, const std::string& key) const
{
    auto it = sections.find(sec);
    return it != sections.end() && it->second.count(key) > 0;
}

std::string Ini::get(const std::string& sec, const std::string& key, std::string fallback) const
{
    auto it = sections.find(sec);
    if (it == sections.end()) return fallback;
    auto kt = it->second.find(key);
    return kt == it->second.end() ? fallback : kt->second;
}

double Ini::get_num(const std::string& sec, const std::string& key, double fallback) const
{
    if (!has(sec, key)) return fallback;
    const std::string v = get(sec, key, "");
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("[" + sec + "] " + key + ": not a number: " + v);
    }
}

bool Ini::get_bool(const std::string& sec, const std::string& key, bool fallback) const
{
    if (!has(sec, key)) return fallback;
    std::string v = get(sec, key, "");
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("[" + sec + "] " + key + ": not a boolean: " + v);
}

Ini parse_ini(const std::string& text, const std::string& origin)
{
    Ini ini;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto c1 = line.find('#');
        if (c1 != std::string::npos) line.erase(c1);
        const auto c2 = line.find(';');
        if (c2 != std::string::npos) line.erase(c2);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            ini.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        ini.sections[section][key] = val;
    }
    return ini;
}

Ini parse_ini_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_ini(ss.str(), path);
}

std::vector<double> ScanGrid::energies() const
{
    if (!(e_min_K > 0) || !(e_max_K > e_min_K) || points_per_decade < 1)
        throw ConfigError("scan grid: need 0 < e_min < e_max and points_per_decade >= 1");
    std::vector<double> out;
    const double decades = std::log10(e_max_K / e_min_K);
    const int n = std::max(2, static_cast<int>(std::lround(decades * points_per_decade)) + 1);
    for (int i = 0; i < n; ++i)
        out.push_back(e_min_K * std::pow(10.0, decades * i / (n - 1)));
    return out;
}

namespace {

Process parse_process(const std::string& s)
{
    if (s == "EC") return Process::EC;
    if (s == "FSQ") return Process::FSQ;
    if (s == "FSE") return Process::FSE;
    if (s == "NRQ") return Process::NRQ;
    if (s == "NRCE") return Process::NRCE;
    throw ConfigError("unknown process name: " + s);
}

} // namespace

RunConfig parse_run_config(const Ini& ini)
{
    RunConfig cfg;
    SurfaceSpec& sp = cfg.surface;
    sp = default_surface_spec();

    sp.mu = ini.get_num("system", "reduced_mass_au", sp.mu);
    sp.c4 = ini.get_num("system", "c4_au", sp.c4);
    sp.ion_s_cm1 = ini.get_num("thresholds", "ion_s_cm1", sp.ion_s_cm1);
    sp.sd32_cm1 = ini.get_num("thresholds", "sd32_cm1", sp.sd32_cm1);
    sp.d_splitting_cm1 = ini.get_num("thresholds", "d_splitting_cm1", sp.d_splitting_cm1);

    for (const auto& [sec, kv] : ini.sections) {
        if (sec.rfind("pec.", 0) == 0) {
            const std::string name = sec.substr(4);
            PecSpec* p = nullptr;
            for (auto& q : sp.pecs)
                if (q.name == name) p = &q;
            if (!p) {
                sp.pecs.push_back({});
                p = &sp.pecs.back();
                p->name = name;
            }
            p->re = ini.get_num(sec, "re", p->re);
            p->de_cm1 = ini.get_num(sec, "de_cm1", p->de_cm1);
            p->c6 = ini.get_num(sec, "c6", p->c6);
            p->c4 = ini.get_num(sec, "c4", p->c4);
            p->table_path = ini.get(sec, "table", p->table_path);
            (void)kv;
        } else if (sec.rfind("soc.", 0) == 0) {
            const std::string pair = sec.substr(4);
            const auto us = pair.find('_');
            if (us == std::string::npos)
                throw ConfigError("[" + sec + "]: section must be soc.<i>_<j>");
            SocSpec s;
            try {
                s.i = std::stoi(pair.substr(0, us));
                s.j = std::stoi(pair.substr(us + 1));
            } catch (const std::exception&) {
                throw ConfigError("[" + sec + "]: bad state indices");
            }
            s.shape = ini.get(sec, "shape", "tanh-switch");
            s.value_cm1 = ini.get_num(sec, "value_cm1", 0.0);
            s.amplitude_cm1 = ini.get_num(sec, "amplitude_cm1", 0.0);
            s.center = ini.get_num(sec, "center", 10.0);
            s.width = ini.get_num(sec, "width", 1.5);
            s.table_path = ini.get(sec, "table", "");
            const std::string sw = ini.get(sec, "swap_with", "");
            if (!sw.empty()) {
                const auto u2 = sw.find('_');
                if (u2 == std::string::npos) throw ConfigError("[" + sec + "]: swap_with must be <i>_<j>");
                s.swap_with_i = std::stoi(sw.substr(0, u2));
                s.swap_with_j = std::stoi(sw.substr(u2 + 1));
                s.swap_radius = ini.get_num(sec, "swap_radius", 11.06);
                s.swap_width = ini.get_num(sec, "swap_width", 1.0);
            }
            // Replace an existing default for the same pair.
            bool replaced = false;
            for (auto& q : sp.socs) {
                if ((q.i == s.i && q.j == s.j) || (q.i == s.j && q.j == s.i)) {
                    q = s;
                    replaced = true;
                }
            }
            if (!replaced) sp.socs.push_back(s);
        }
    }

    sp.x1_w_au = ini.get_num("x1", "w_au", sp.x1_w_au);
    sp.x1_rc = ini.get_num("x1", "rc", sp.x1_rc);
    sp.x1_delta = ini.get_num("x1", "delta", sp.x1_delta);

    const std::string ent = ini.get("scan", "entrance", "5D52");
    if (ent == "5D52" || ent == "5D5/2")
        cfg.entrance = Entrance::D52;
    else if (ent == "5D32" || ent == "5D3/2")
        cfg.entrance = Entrance::D32;
    else
        throw ConfigError("[scan] entrance must be 5D32 or 5D52, got " + ent);
    cfg.scan.e_min_K = ini.get_num("scan", "e_min_K", cfg.scan.e_min_K);
    cfg.scan.e_max_K = ini.get_num("scan", "e_max_K", cfg.scan.e_max_K);
    cfg.scan.points_per_decade =
        static_cast<int>(ini.get_num("scan", "points_per_decade", cfg.scan.points_per_decade));
    const std::string procs = ini.get("scan", "processes", "FSQ,NRQ,NRCE");
    cfg.processes.clear();
    std::stringstream ps(procs);
    std::string tok;
    while (std::getline(ps, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) cfg.processes.push_back(parse_process(tok));
    }
    if (cfg.processes.empty()) throw ConfigError("[scan] processes: empty list");
    cfg.j_max_policy = ini.get("scan", "j_max_policy", cfg.j_max_policy);
    if (cfg.j_max_policy != "auto" && cfg.j_max_policy != "fixed")
        throw ConfigError("[scan] j_max_policy must be auto or fixed");
    cfg.j_max_fixed = static_cast<int>(ini.get_num("scan", "j_max", cfg.j_max_fixed));
    cfg.j_margin = static_cast<int>(ini.get_num("scan", "j_margin", cfg.j_margin));
    cfg.j_cap = static_cast<int>(ini.get_num("scan", "j_cap", cfg.j_cap));
    const std::string par = ini.get("scan", "parities", "both");
    cfg.parity_plus = (par == "both" || par == "+");
    cfg.parity_minus = (par == "both" || par == "-");
    if (!cfg.parity_plus && !cfg.parity_minus)
        throw ConfigError("[scan] parities must be '+', '-' or 'both'");
    cfg.divide_entrance_degeneracy =
        ini.get_bool("scan", "divide_entrance_degeneracy", cfg.divide_entrance_degeneracy);

    cfg.prop.r_min = ini.get_num("propagator", "r_min", cfg.prop.r_min);
    cfg.prop.r_max = ini.get_num("propagator", "r_max", cfg.prop.r_max);
    cfg.prop.step = ini.get_num("propagator", "step", cfg.prop.step);
    cfg.prop.auto_extend = ini.get_bool("propagator", "auto_extend", cfg.prop.auto_extend);
    if (cfg.prop.r_min <= 0 || cfg.prop.step <= 0 || cfg.prop.r_max <= cfg.prop.r_min)
        throw ConfigError("[propagator] needs 0 < r_min < r_max and step > 0");

    cfg.thermal_t_min_K = ini.get_num("thermal", "t_min_K", cfg.thermal_t_min_K);
    cfg.thermal_t_max_K = ini.get_num("thermal", "t_max_K", cfg.thermal_t_max_K);
    cfg.thermal_points_per_decade =
        static_cast<int>(ini.get_num("thermal", "points_per_decade", cfg.thermal_points_per_decade));
    const std::string avg = ini.get("thermal", "langevin_average", "capped");
    if (avg == "capped")
        cfg.langevin_average_kind = LangevinAverage::capped;
    else if (avg == "plain")
        cfg.langevin_average_kind = LangevinAverage::plain;
    else
        throw ConfigError("[thermal] langevin_average must be capped or plain");

    cfg.out_dir = ini.get("outputs", "directory", cfg.out_dir);
    cfg.workers = static_cast<int>(ini.get_num("run", "workers", cfg.workers));
    if (cfg.workers < 1) throw ConfigError("[run] workers must be >= 1");
    return cfg;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(parse_ini_file(path)); }

XsecSettings RunConfig::xsec_settings() const
{
    XsecSettings s;
    s.entrance = entrance;
    s.prop = prop;
    s.j_margin = j_margin;
    s.j_cap = j_cap;
    s.divide_entrance_degeneracy = divide_entrance_degeneracy;
    return s;
}

namespace {

void put(std::ostringstream& os, const std::string& key, double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    os << key << "=" << buf << "\n";
}

void put(std::ostringstream& os, const std::string& key, const std::string& v)
{
    os << key << "=" << v << "\n";
}

} // namespace

std::string canonical_config(const RunConfig& cfg)
{
    std::ostringstream os;
    const SurfaceSpec& sp = cfg.surface;
    put(os, "system.reduced_mass_au", sp.mu);
    put(os, "system.c4_au", sp.c4);
    put(os, "thresholds.ion_s_cm1", sp.ion_s_cm1);
    put(os, "thresholds.sd32_cm1", sp.sd32_cm1);
    put(os, "thresholds.d_splitting_cm1", sp.d_splitting_cm1);
    auto pecs = sp.pecs;
    std::sort(pecs.begin(), pecs.end(), [](auto& a, auto& b) { return a.name < b.name; });
    for (const auto& p : pecs) {
        const std::string k = "pec." + p.name + ".";
        put(os, k + "re", p.re);
        put(os, k + "de_cm1", p.de_cm1);
        put(os, k + "c6", p.c6);
        put(os, k + "c4", p.c4);
        if (!p.table_path.empty()) put(os, k + "table", p.table_path);
    }
    auto socs = sp.socs;
    std::sort(socs.begin(), socs.end(), [](auto& a, auto& b) {
        return std::make_pair(a.i, a.j) < std::make_pair(b.i, b.j);
    });
    for (const auto& s : socs) {
        const std::string k = "soc." + std::to_string(s.i) + "_" + std::to_string(s.j) + ".";
        put(os, k + "shape", s.shape);
        put(os, k + "value_cm1", s.value_cm1);
        put(os, k + "amplitude_cm1", s.amplitude_cm1);
        put(os, k + "center", s.center);
        put(os, k + "width", s.width);
        if (!s.table_path.empty()) put(os, k + "table", s.table_path);
        if (s.swap_with_i != 0) {
            put(os, k + "swap_with", std::to_string(s.swap_with_i) + "_" + std::to_string(s.swap_with_j));
            put(os, k + "swap_radius", s.swap_radius);
            put(os, k + "swap_width", s.swap_width);
        }
    }
    put(os, "x1.w_au", sp.x1_w_au);
    put(os, "x1.rc", sp.x1_rc);
    put(os, "x1.delta", sp.x1_delta);
    put(os, "scan.entrance", std::string(entrance_name(cfg.entrance)));
    put(os, "scan.e_min_K", cfg.scan.e_min_K);
    put(os, "scan.e_max_K", cfg.scan.e_max_K);
    put(os, "scan.points_per_decade", static_cast<double>(cfg.scan.points_per_decade));
    std::string procs;
    for (Process p : cfg.processes) procs += std::string(process_name(p)) + ",";
    put(os, "scan.processes", procs);
    put(os, "scan.j_max_policy", cfg.j_max_policy);
    put(os, "scan.j_max", static_cast<double>(cfg.j_max_fixed));
    put(os, "scan.j_margin", static_cast<double>(cfg.j_margin));
    put(os, "scan.j_cap", static_cast<double>(cfg.j_cap));
    put(os, "scan.parities", std::string(cfg.parity_plus ? "+" : "") + (cfg.parity_minus ? "-" : ""));
    put(os, "scan.divide", cfg.divide_entrance_degeneracy ? "true" : "false");
    put(os, "prop.r_min", cfg.prop.r_min);
    put(os, "prop.r_max", cfg.prop.r_max);
    put(os, "prop.step", cfg.prop.step);
    put(os, "prop.auto_extend", cfg.prop.auto_extend ? "true" : "false");
    put(os, "thermal.t_min_K", cfg.thermal_t_min_K);
    put(os, "thermal.t_max_K", cfg.thermal_t_max_K);
    put(os, "thermal.points_per_decade", static_cast<double>(cfg.thermal_points_per_decade));
    put(os, "thermal.langevin_average",
        cfg.langevin_average_kind == LangevinAverage::capped ? "capped" : "plain");
    return os.str();
}

std::uint64_t config_hash(const RunConfig& cfg)
{
    const std::string s = canonical_config(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash_hex(const RunConfig& cfg)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
    return buf;
}

} // namespace atomion
