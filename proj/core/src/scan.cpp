#include "atomion/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "atomion/errors.hpp"
#include "atomion/units.hpp"

namespace atomion {

namespace fs = std::filesystem;

std::string BlockKey::energy_token() const
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10e", e_coll_K);
    return buf;
}

bool BlockKey::operator<(const BlockKey& o) const
{
    if (e_coll_K != o.e_coll_K) return e_coll_K < o.e_coll_K;
    if (J != o.J) return J < o.J;
    return parity > o.parity; // '+' first
}

std::string SMatrixArchive::token(const BlockKey& key)
{
    return key.energy_token() + "|" + std::to_string(key.J) + "|" + std::to_string(key.parity);
}

void SMatrixArchive::put(BlockRecord rec) { records_[token(rec.key)] = std::move(rec); }

const BlockRecord* SMatrixArchive::find(const BlockKey& key) const
{
    auto it = records_.find(token(key));
    return it == records_.end() ? nullptr : &it->second;
}

std::vector<const BlockRecord*> SMatrixArchive::sorted() const
{
    std::vector<const BlockRecord*> out;
    out.reserve(records_.size());
    for (const auto& [k, v] : records_) out.push_back(&v);
    std::sort(out.begin(), out.end(),
              [](const BlockRecord* a, const BlockRecord* b) { return a->key < b->key; });
    return out;
}

void SMatrixArchive::append_record(std::ostream& os, const BlockRecord& rec)
{
    char buf[160];
    const int n = static_cast<int>(rec.open_channels.size());
    std::snprintf(buf, sizeof buf, "#record e_coll_K=%s J=%d parity=%d status=%s nopen=%d r_max=%.6e\n",
                  rec.key.energy_token().c_str(), rec.key.J, rec.key.parity,
                  rec.ok ? "ok" : "failed", rec.ok ? n : 0, rec.r_max_used);
    os << buf;
    if (!rec.ok) {
        std::string msg = rec.error;
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        os << "#error " << msg << "\n";
        return;
    }
    os << "#channels ";
    for (int c = 0; c < n; ++c) {
        const auto& ch = rec.open_channels[static_cast<std::size_t>(c)];
        if (c) os << "|";
        os << ch.label << ";" << ch.ell << ";";
        std::snprintf(buf, sizeof buf, "%.10e", ch.threshold);
        os << buf;
    }
    os << "\n";
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            std::snprintf(buf, sizeof buf, "%.16e %.16e", rec.S(r, c).real(), rec.S(r, c).imag());
            os << (c ? " " : "") << buf;
        }
        os << "\n";
    }
}

void SMatrixArchive::write(const std::string& path) const
{
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write archive: " + path);
    os << "#atomion-smatrix-archive v1\n";
    os << "#config_hash=" << hash_ << "\n";
    for (const BlockRecord* rec : sorted()) append_record(os, *rec);
}

SMatrixArchive SMatrixArchive::load(const std::string& path)
{
    SMatrixArchive arc;
    std::ifstream in(path);
    if (!in) return arc;
    std::string line;
    BlockRecord cur;
    bool have_cur = false;
    int rows_expected = 0, rows_read = 0;

    auto flush = [&] {
        if (have_cur && (!cur.ok || rows_read == rows_expected)) arc.put(cur);
        have_cur = false;
    };

    while (std::getline(in, line)) {
        if (line.rfind("#config_hash=", 0) == 0) {
            arc.hash_ = line.substr(13);
        } else if (line.rfind("#record ", 0) == 0) {
            flush();
            cur = BlockRecord{};
            rows_expected = rows_read = 0;
            std::istringstream ss(line.substr(8));
            std::string tokstr;
            while (ss >> tokstr) {
                const auto eq = tokstr.find('=');
                if (eq == std::string::npos) continue;
                const std::string k = tokstr.substr(0, eq), v = tokstr.substr(eq + 1);
                if (k == "e_coll_K") cur.key.e_coll_K = std::stod(v);
                else if (k == "J") cur.key.J = std::stoi(v);
                else if (k == "parity") cur.key.parity = std::stoi(v);
                else if (k == "status") cur.ok = (v == "ok");
                else if (k == "nopen") rows_expected = std::stoi(v);
                else if (k == "r_max") cur.r_max_used = std::stod(v);
            }
            cur.S.resize(rows_expected, rows_expected);
            have_cur = true;
        } else if (line.rfind("#error ", 0) == 0) {
            if (have_cur) cur.error = line.substr(7);
        } else if (line.rfind("#channels ", 0) == 0) {
            if (!have_cur) continue;
            std::stringstream ss(line.substr(10));
            std::string item;
            while (std::getline(ss, item, '|')) {
                const auto s1 = item.rfind(';');
                const auto s0 = item.rfind(';', s1 == std::string::npos ? s1 : s1 - 1);
                if (s0 == std::string::npos || s1 == std::string::npos) continue;
                Channel ch;
                ch.label = item.substr(0, s0);
                ch.ell = std::stoi(item.substr(s0 + 1, s1 - s0 - 1));
                ch.threshold = std::stod(item.substr(s1 + 1));
                cur.open_channels.push_back(ch);
            }
        } else if (!line.empty() && line[0] != '#') {
            if (!have_cur || rows_read >= rows_expected) continue;
            std::istringstream ss(line);
            for (int c = 0; c < rows_expected; ++c) {
                double re = 0, im = 0;
                ss >> re >> im;
                cur.S(rows_read, c) = {re, im};
            }
            ++rows_read;
        }
    }
    flush();
    return arc;
}

namespace {

double entrance_threshold_au(const RunConfig& cfg, const PotentialSurfaceSet& s)
{
    return cfg.entrance == Entrance::D32 ? s.thresholds().sd32 : s.thresholds().sd52;
}

std::vector<BlockKey> plan_blocks(const RunConfig& cfg, const PotentialSurfaceSet& surface)
{
    std::vector<BlockKey> plan;
    for (double e_K : cfg.scan.energies()) {
        const double e_au = units::hartree_from_kelvin(e_K);
        int jmax = cfg.j_max_fixed;
        if (cfg.j_max_policy == "auto")
            jmax = std::min(cfg.j_cap,
                            langevin_j_estimate(surface.reduced_mass(), surface.entrance_c4(), e_au) +
                                cfg.j_margin);
        for (int J = 0; J <= jmax; ++J) {
            if (cfg.parity_plus) plan.push_back({e_K, J, +1});
            if (cfg.parity_minus) plan.push_back({e_K, J, -1});
        }
    }
    std::sort(plan.begin(), plan.end());
    return plan;
}

BlockRecord compute_block(const RunConfig& cfg, const PotentialSurfaceSet& surface,
                          const BlockKey& key)
{
    BlockRecord rec;
    rec.key = key;
    try {
        const double e_total =
            units::hartree_from_kelvin(key.e_coll_K) + entrance_threshold_au(cfg, surface);
        const CoupledProblem p = make_mcqs_problem(surface, key.J, key.parity, e_total);
        const SMatrixBlock b = solve_block(p, cfg.prop);
        rec.ok = true;
        rec.open_channels = b.open_channels;
        rec.S = b.S;
        rec.r_max_used = b.r_max_used;
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    return rec;
}

SMatrixBlock record_to_block(const BlockRecord& rec, const RunConfig& cfg,
                             const ThresholdSet& th)
{
    SMatrixBlock b;
    b.J = rec.key.J;
    b.parity = rec.key.parity;
    const double tin = cfg.entrance == Entrance::D32 ? th.sd32 : th.sd52;
    b.energy = units::hartree_from_kelvin(rec.key.e_coll_K) + tin;
    b.open_channels = rec.open_channels;
    b.S = rec.S;
    return b;
}

} // namespace

ScanSummary run_scan(const RunConfig& cfg, const PotentialSurfaceSet& surface, bool resume,
                     std::ostream& log)
{
    ScanSummary summary;
    const std::string hash = config_hash_hex(cfg);
    fs::create_directories(cfg.out_dir);
    const std::string arc_path = cfg.out_dir + "/smatrix.arc";

    SMatrixArchive archive;
    if (resume && fs::exists(arc_path)) {
        archive = SMatrixArchive::load(arc_path);
        if (!archive.hash().empty() && archive.hash() != hash)
            throw ConfigError("resume: archive " + arc_path + " was produced by config hash " +
                              archive.hash() + ", current is " + hash);
    }
    archive.set_hash(hash);

    const std::vector<BlockKey> plan = plan_blocks(cfg, surface);
    summary.planned = static_cast<int>(plan.size());

    std::vector<const BlockKey*> todo;
    for (const auto& key : plan) {
        const BlockRecord* r = archive.find(key);
        if (r && r->ok)
            ++summary.reused;
        else
            todo.push_back(&key);
    }
    log << "# planned " << plan.size() << " blocks, reusing " << summary.reused << ", computing "
        << todo.size() << " with " << cfg.workers << " workers\n";

    // Progressive journal so an interrupted sweep can resume.
    const bool fresh_file = !resume || !fs::exists(arc_path) || fs::file_size(arc_path) == 0;
    std::ofstream journal(arc_path, resume ? std::ios::app : std::ios::trunc);
    if (!journal) throw ConfigError("cannot open archive for writing: " + arc_path);
    if (fresh_file) {
        journal << "#atomion-smatrix-archive v1\n";
        journal << "#config_hash=" << hash << "\n";
    }

    std::atomic<std::size_t> next{0};
    std::mutex collect_mutex;
    std::size_t done = 0;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) return;
            BlockRecord rec = compute_block(cfg, surface, *todo[i]);
            std::lock_guard<std::mutex> lk(collect_mutex);
            if (!rec.ok) {
                ++summary.failed;
                summary.failures.push_back("E=" + rec.key.energy_token() +
                                           " J=" + std::to_string(rec.key.J) +
                                           " p=" + std::to_string(rec.key.parity) + ": " + rec.error);
            }
            SMatrixArchive::append_record(journal, rec);
            journal.flush();
            archive.put(std::move(rec));
            if (++done % 50 == 0) log << "# " << done << "/" << todo.size() << " blocks done\n";
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < cfg.workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    journal.close();
    summary.computed = static_cast<int>(todo.size()) - summary.failed;

    // Canonical rewrite: records sorted, independent of completion order.
    archive.write(arc_path);

    // Cross sections from the stored blocks.
    const ScanData data = load_scan_data(cfg, cfg.out_dir);
    write_xsec_csv(data, cfg.out_dir + "/xsec.csv");
    for (const auto& w : surface.warnings()) summary.warnings.push_back(w);
    return summary;
}

const ProcessCurve& ScanData::curve(Process p) const
{
    for (const auto& c : curves)
        if (c.process == p) return c;
    throw ConfigError(std::string("no scan curve for process ") + process_name(p));
}

RateCurve ScanData::rate_curve(Process p, double mu) const
{
    const ProcessCurve& c = curve(p);
    RateCurve rc;
    for (std::size_t i = 0; i < c.energy_K.size(); ++i) {
        const double e_au = units::hartree_from_kelvin(c.energy_K[i]);
        const double v = std::sqrt(2.0 * e_au / mu);
        rc.energy_K.push_back(c.energy_K[i]);
        rc.rate_cm3s.push_back(v * c.sigma_total[i] * units::au_rate_in_cm3_per_s);
    }
    return rc;
}

double ScanData::block_sigma(const BlockKey& key, Process p) const
{
    const BlockRecord* rec = archive.find(key);
    if (!rec || !rec->ok) return 0.0;
    // thresholds reconstructed from the configured surface spec
    ThresholdSet th;
    th.ion_s = units::hartree_from_cm1(cfg.surface.ion_s_cm1);
    th.sd32 = units::hartree_from_cm1(cfg.surface.sd32_cm1);
    th.sd52 = units::hartree_from_cm1(cfg.surface.sd32_cm1 + cfg.surface.d_splitting_cm1);
    const SMatrixBlock b = record_to_block(*rec, cfg, th);
    const ProcessSums sums = block_process_sums(b, th, cfg.entrance, cfg.divide_entrance_degeneracy);
    const double e_au = units::hartree_from_kelvin(key.e_coll_K);
    const double k2 = 2.0 * cfg.surface.mu * e_au;
    return M_PI / k2 * sums.of(p);
}

ScanData load_scan_data(const RunConfig& cfg, const std::string& out_dir)
{
    ScanData data;
    data.cfg = cfg;
    const std::string arc_path = out_dir + "/smatrix.arc";
    if (!fs::exists(arc_path))
        throw ConfigError("missing artifact " + arc_path + "; run `xsec-scan` first");
    data.archive = SMatrixArchive::load(arc_path);
    const std::string hash = config_hash_hex(cfg);
    if (!data.archive.hash().empty() && data.archive.hash() != hash)
        throw ConfigError("archive " + arc_path + " has config hash " + data.archive.hash() +
                          " but the active config hashes to " + hash);
    data.energies_K = cfg.scan.energies();

    ThresholdSet th;
    th.ion_s = units::hartree_from_cm1(cfg.surface.ion_s_cm1);
    th.sd32 = units::hartree_from_cm1(cfg.surface.sd32_cm1);
    th.sd52 = units::hartree_from_cm1(cfg.surface.sd32_cm1 + cfg.surface.d_splitting_cm1);

    std::vector<Process> procs = cfg.processes;
    for (Process p : procs) {
        ProcessCurve curve;
        curve.process = p;
        curve.energy_K = data.energies_K;
        curve.sigma_total.assign(data.energies_K.size(), 0.0);
        curve.sigma_parity_plus.assign(data.energies_K.size(), 0.0);
        curve.sigma_parity_minus.assign(data.energies_K.size(), 0.0);
        data.curves.push_back(std::move(curve));
    }

    for (std::size_t ie = 0; ie < data.energies_K.size(); ++ie) {
        const double e_K = data.energies_K[ie];
        const double e_au = units::hartree_from_kelvin(e_K);
        const double pref = M_PI / (2.0 * cfg.surface.mu * e_au);
        for (int parity : {+1, -1}) {
            if (parity > 0 && !cfg.parity_plus) continue;
            if (parity < 0 && !cfg.parity_minus) continue;
            for (int J = 0; J <= cfg.j_cap; ++J) {
                const BlockRecord* rec = data.archive.find({e_K, J, parity});
                if (!rec) break; // beyond the planned J range for this energy
                if (!rec->ok) continue;
                const SMatrixBlock b = record_to_block(*rec, cfg, th);
                const ProcessSums sums =
                    block_process_sums(b, th, cfg.entrance, cfg.divide_entrance_degeneracy);
                for (auto& curve : data.curves) {
                    const double sig = pref * sums.of(curve.process);
                    const double w = (2.0 * J + 1.0) * sig;
                    if (parity > 0)
                        curve.sigma_parity_plus[ie] += w;
                    else
                        curve.sigma_parity_minus[ie] += w;
                }
            }
        }
        for (auto& curve : data.curves) {
            if (cfg.parity_plus && cfg.parity_minus)
                curve.sigma_total[ie] =
                    0.5 * (curve.sigma_parity_plus[ie] + curve.sigma_parity_minus[ie]);
            else
                curve.sigma_total[ie] =
                    cfg.parity_plus ? curve.sigma_parity_plus[ie] : curve.sigma_parity_minus[ie];
        }
    }
    return data;
}

namespace {

void write_metadata(std::ofstream& os, const RunConfig& cfg, const char* kind)
{
    os << "# atomion " << kind << "\n";
    os << "# config_hash=" << config_hash_hex(cfg) << "\n";
    os << "# entrance=" << entrance_name(cfg.entrance) << " j_max_policy=" << cfg.j_max_policy
       << " j_margin=" << cfg.j_margin << " j_cap=" << cfg.j_cap << "\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "# grid e_min_K=%.6e e_max_K=%.6e points_per_decade=%d\n",
                  cfg.scan.e_min_K, cfg.scan.e_max_K, cfg.scan.points_per_decade);
    os << buf;
    std::snprintf(buf, sizeof buf, "# propagator r_min=%.3f r_max=%.1f step=%.4g\n", cfg.prop.r_min,
                  cfg.prop.r_max, cfg.prop.step);
    os << buf;
}

} // namespace

void write_xsec_csv(const ScanData& data, const std::string& path)
{
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path);
    write_metadata(os, data.cfg, "xsec scan");
    os << "# rows: J_or_ell >= 0 are per-block sigma(E,J,p); J_or_ell=-1 with parity=+-1 are "
          "(2J+1)-weighted parity sums; parity=0 rows are the parity mean\n";
    os << "energy_K,process,J_or_ell,parity,sigma_a0sq\n";
    char buf[200];
    for (std::size_t ie = 0; ie < data.energies_K.size(); ++ie) {
        const double e_K = data.energies_K[ie];
        for (const auto& curve : data.curves) {
            for (int parity : {+1, -1}) {
                for (int J = 0; J <= data.cfg.j_cap; ++J) {
                    const BlockKey key{e_K, J, parity};
                    if (!data.archive.find(key)) break;
                    const double sig = data.block_sigma(key, curve.process);
                    std::snprintf(buf, sizeof buf, "%.10e,%s,%d,%d,%.10e\n", e_K,
                                  process_name(curve.process), J, parity, sig);
                    os << buf;
                }
            }
            std::snprintf(buf, sizeof buf, "%.10e,%s,-1,1,%.10e\n", e_K,
                          process_name(curve.process), curve.sigma_parity_plus[ie]);
            os << buf;
            std::snprintf(buf, sizeof buf, "%.10e,%s,-1,-1,%.10e\n", e_K,
                          process_name(curve.process), curve.sigma_parity_minus[ie]);
            os << buf;
            std::snprintf(buf, sizeof buf, "%.10e,%s,-1,0,%.10e\n", e_K,
                          process_name(curve.process), curve.sigma_total[ie]);
            os << buf;
        }
    }
}

void write_rates_csv(const ScanData& data, const std::string& path)
{
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path);
    write_metadata(os, data.cfg, "thermal rates");
    os << "T_K,process,rate_cm3s,rate_over_KL\n";
    const double kl = langevin_rate_thermal(data.cfg.surface.c4, data.cfg.surface.mu, 0.0);
    const double decades = std::log10(data.cfg.thermal_t_max_K / data.cfg.thermal_t_min_K);
    const int n = std::max(2, static_cast<int>(std::lround(decades * data.cfg.thermal_points_per_decade)) + 1);
    char buf[160];
    for (const auto& curve : data.curves) {
        const RateCurve rc = data.rate_curve(curve.process, data.cfg.surface.mu);
        for (int i = 0; i < n; ++i) {
            const double t = data.cfg.thermal_t_min_K * std::pow(10.0, decades * i / (n - 1));
            const double k = rc.thermal(t);
            std::snprintf(buf, sizeof buf, "%.10e,%s,%.10e,%.10e\n", t, process_name(curve.process),
                          k, k / kl);
            os << buf;
        }
    }
}

std::vector<ResonanceRecord> find_resonances(const ScanData& data)
{
    std::vector<ResonanceRecord> out;
    for (const auto& curve : data.curves) {
        const auto& e = curve.energy_K;
        const auto& s = curve.sigma_total;
        for (std::size_t i = 1; i + 1 < e.size(); ++i) {
            if (!(s[i] > 3.0 * s[i - 1] && s[i] > 3.0 * s[i + 1]) || s[i] <= 0) continue;
            ResonanceRecord rec;
            rec.process = curve.process;
            rec.peak_energy_K = e[i];
            rec.peak_sigma = s[i];
            // attribute to the (J, parity) block with the largest weighted share
            double best = -1;
            for (int parity : {+1, -1}) {
                for (int J = 0; J <= data.cfg.j_cap; ++J) {
                    const BlockKey key{e[i], J, parity};
                    if (!data.archive.find(key)) break;
                    const double contrib = (2.0 * J + 1.0) * data.block_sigma(key, curve.process);
                    if (contrib > best) {
                        best = contrib;
                        rec.J = J;
                        rec.parity = parity;
                    }
                }
            }
            // width: span around the peak above half maximum
            std::size_t lo = i, hi = i;
            while (lo > 0 && s[lo] > 0.5 * s[i]) --lo;
            while (hi + 1 < e.size() && s[hi] > 0.5 * s[i]) ++hi;
            rec.width_K = e[hi] - e[lo];
            out.push_back(rec);
        }
    }
    return out;
}

void write_resonances_csv(const ScanData& data, const std::vector<ResonanceRecord>& recs,
                          const std::string& path)
{
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path);
    write_metadata(os, data.cfg, "resonances");
    os << "process,J,parity,peak_energy_K,peak_sigma_a0sq,width_K\n";
    char buf[160];
    for (const auto& r : recs) {
        std::snprintf(buf, sizeof buf, "%s,%d,%d,%.10e,%.10e,%.10e\n", process_name(r.process), r.J,
                      r.parity, r.peak_energy_K, r.peak_sigma, r.width_K);
        os << buf;
    }
}

PlotStyle parse_plot_style(const std::string& s)
{
    if (s == "xsec") return PlotStyle::xsec;
    if (s == "rates") return PlotStyle::rates;
    if (s == "pecs") return PlotStyle::pecs;
    if (s == "adiabats") return PlotStyle::adiabats;
    throw ConfigError("unknown plot style: " + s + " (expected xsec|rates|pecs|adiabats)");
}

void emit_plotdata(const RunConfig& cfg, const PotentialSurfaceSet& surface, PlotStyle style,
                   const std::string& out_dir, int J, int parity)
{
    fs::create_directories(out_dir + "/plot");
    char buf[240];
    if (style == PlotStyle::xsec || style == PlotStyle::rates) {
        const ScanData data = load_scan_data(cfg, out_dir);
        if (style == PlotStyle::xsec) {
            std::ofstream os(out_dir + "/plot/xsec.csv");
            write_metadata(os, cfg, "plot xsec");
            os << "energy_K,process,sigma_a0sq,sigma_langevin_a0sq\n";
            for (const auto& curve : data.curves) {
                for (std::size_t i = 0; i < curve.energy_K.size(); ++i) {
                    const double e_au = units::hartree_from_kelvin(curve.energy_K[i]);
                    std::snprintf(buf, sizeof buf, "%.10e,%s,%.10e,%.10e\n", curve.energy_K[i],
                                  process_name(curve.process), curve.sigma_total[i],
                                  langevin_sigma(cfg.surface.c4, e_au));
                    os << buf;
                }
            }
        } else {
            std::ofstream os(out_dir + "/plot/rates.csv");
            write_metadata(os, cfg, "plot rates");
            os << "energy_K,process,K_cm3s,K_langevin_cm3s\n";
            const double kl = langevin_rate_thermal(cfg.surface.c4, cfg.surface.mu, 0.0);
            for (const auto& curve : data.curves) {
                const RateCurve rc = data.rate_curve(curve.process, cfg.surface.mu);
                for (std::size_t i = 0; i < rc.energy_K.size(); ++i) {
                    std::snprintf(buf, sizeof buf, "%.10e,%s,%.10e,%.10e\n", rc.energy_K[i],
                                  process_name(curve.process), rc.rate_cm3s[i], kl);
                    os << buf;
                }
            }
            std::ofstream ot(out_dir + "/plot/rates_thermal.csv");
            write_metadata(ot, cfg, "plot thermal rates");
            ot << "T_K,process,K_cm3s,K_over_KL,K_langevin_avg_cm3s\n";
            const double decades = std::log10(cfg.thermal_t_max_K / cfg.thermal_t_min_K);
            const int n =
                std::max(2, static_cast<int>(std::lround(decades * cfg.thermal_points_per_decade)) + 1);
            for (const auto& curve : data.curves) {
                const RateCurve rc = data.rate_curve(curve.process, cfg.surface.mu);
                for (int i = 0; i < n; ++i) {
                    const double t = cfg.thermal_t_min_K * std::pow(10.0, decades * i / (n - 1));
                    const double k = rc.thermal(t);
                    const double kavg =
                        langevin_average(rc, t, cfg.surface.c4, cfg.surface.mu, cfg.langevin_average_kind);
                    std::snprintf(buf, sizeof buf, "%.10e,%s,%.10e,%.10e,%.10e\n", t,
                                  process_name(curve.process), k, k / kl, kavg);
                    ot << buf;
                }
            }
        }
        return;
    }
    // Potential-derived bundles need no scan artifacts.
    std::vector<double> grid;
    for (double r = 4.0; r <= 60.0 + 1e-9; r += 0.05) grid.push_back(r);
    if (style == PlotStyle::pecs) {
        std::ofstream os(out_dir + "/plot/pecs.csv");
        write_metadata(os, cfg, "plot pecs");
        os << "R_bohr";
        for (int s = 1; s <= 16; ++s) os << ",V" << s << "_cm1";
        os << ",G23_cm1\n";
        for (double r : grid) {
            const Eigen::MatrixXd m = surface.bf_matrix(r);
            os << r;
            for (int s = 1; s <= 16; ++s) {
                std::snprintf(buf, sizeof buf, ",%.8e", units::cm1_from_hartree(m(s - 1, s - 1)));
                os << buf;
            }
            std::snprintf(buf, sizeof buf, ",%.8e\n", units::cm1_from_hartree(surface.x1_gaussian(r)));
            os << buf;
        }
    } else {
        const AdiabatSet ad = adiabats_case_e(surface, J, parity, grid);
        std::snprintf(buf, sizeof buf, "%s/plot/adiabats_J%d_p%s.csv", out_dir.c_str(), J,
                      parity > 0 ? "plus" : "minus");
        std::ofstream os(buf);
        write_metadata(os, cfg, "plot adiabats");
        os << "R_bohr";
        for (const auto& lbl : ad.labels) os << "," << lbl;
        os << "\n";
        for (std::size_t g = 0; g < ad.grid.size(); ++g) {
            os << ad.grid[g];
            for (Eigen::Index k = 0; k < ad.curves.rows(); ++k) {
                std::snprintf(buf, sizeof buf, ",%.8e",
                              units::cm1_from_hartree(ad.curves(k, static_cast<Eigen::Index>(g))));
                os << buf;
            }
            os << "\n";
        }
    }
}

} // namespace atomion
