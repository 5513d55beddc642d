#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atomion/config.hpp"
#include "atomion/observables.hpp"

namespace atomion {

struct BlockKey {
    double e_coll_K = 0; // collision energy above the entrance threshold
    int J = 0;
    int parity = +1;

    std::string energy_token() const; // fixed-format key used for matching
    bool operator<(const BlockKey& o) const;
};

struct BlockRecord {
    BlockKey key;
    bool ok = false;
    std::string error;
    std::vector<Channel> open_channels;
    Eigen::MatrixXcd S;
    double r_max_used = 0;
};

// Self-describing text container of S-matrix blocks, diffable and stable
// across reruns of the same configuration.
class SMatrixArchive {
  public:
    static SMatrixArchive load(const std::string& path);

    void put(BlockRecord rec);
    const BlockRecord* find(const BlockKey& key) const;
    std::size_t size() const { return records_.size(); }
    std::vector<const BlockRecord*> sorted() const;

    const std::string& hash() const { return hash_; }
    void set_hash(std::string h) { hash_ = std::move(h); }

    void write(const std::string& path) const;
    // Append one record to an open stream (progressive writes during a run).
    static void append_record(std::ostream& os, const BlockRecord& rec);

  private:
    std::string hash_;
    std::map<std::string, BlockRecord> records_; // key token -> record
    static std::string token(const BlockKey& key);
};

struct ScanSummary {
    int planned = 0;
    int computed = 0;
    int reused = 0;
    int failed = 0;
    std::vector<std::string> failures;
    std::vector<std::string> warnings;
};

// Batch driver: plans the (energy, J, parity) sweep, runs blocks on a worker
// pool, persists the archive and the cross-section table. Identical configs
// give identical outputs regardless of worker count; completed blocks are
// skipped when resuming.
ScanSummary run_scan(const RunConfig& cfg, const PotentialSurfaceSet& surface, bool resume,
                     std::ostream& log);

// Post-processing views over a completed (or partial) archive.
struct ProcessCurve {
    Process process;
    std::vector<double> energy_K;
    std::vector<double> sigma_total; // a0^2, Eq.(7)-style parity mean
    std::vector<double> sigma_parity_plus;
    std::vector<double> sigma_parity_minus;
};

struct ScanData {
    RunConfig cfg;
    SMatrixArchive archive;
    std::vector<double> energies_K;
    std::vector<ProcessCurve> curves;

    const ProcessCurve& curve(Process p) const;
    RateCurve rate_curve(Process p, double mu) const; // K(E) in cm^3/s
    // sigma(E, J, p; f) looked up from one stored block.
    double block_sigma(const BlockKey& key, Process p) const;
};

ScanData load_scan_data(const RunConfig& cfg, const std::string& out_dir);

struct ResonanceRecord {
    Process process;
    int J = 0;
    int parity = 0;
    double peak_energy_K = 0;
    double peak_sigma = 0; // a0^2
    double width_K = 0;
};

std::vector<ResonanceRecord> find_resonances(const ScanData& data);

// CSV emitters. All outputs embed the config hash in '#' metadata lines.
void write_xsec_csv(const ScanData& data, const std::string& path);
void write_rates_csv(const ScanData& data, const std::string& path);
void write_resonances_csv(const ScanData& data, const std::vector<ResonanceRecord>& recs,
                          const std::string& path);

enum class PlotStyle { xsec, rates, pecs, adiabats };
PlotStyle parse_plot_style(const std::string& s);

// Figure-style CSV bundles derived from stored artifacts; throws ConfigError
// listing what to run when artifacts are missing, and rejects archives whose
// config hash differs from the active configuration.
void emit_plotdata(const RunConfig& cfg, const PotentialSurfaceSet& surface, PlotStyle style,
                   const std::string& out_dir, int J = 0, int parity = +1);

} // namespace atomion
