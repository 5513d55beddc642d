#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "atomion/basis.hpp"
#include "atomion/math_util.hpp"

namespace atomion {

// One spin-free electronic curve. The model form is a Morse well joined to
// the -C4/R^4 - C6/R^6 tail through a smooth C^2 blend window centered on
// switch_radius; the Morse steepness is solved so the two branches agree in
// value at the blend center. Tabulated curves use a natural cubic spline and
// continue past the last sample with a tail whose C6 is refitted for value
// continuity at the boundary.
struct PecModel {
    enum class Form { morse_longrange, tabulated_spline };

    std::string name;
    Form form = Form::morse_longrange;
    double re = 0;         // a0
    double de = 0;         // Eh
    double c4 = 0;         // Eh a0^4
    double c6 = 0;         // Eh a0^6 (sign as tabulated)
    double threshold = 0;  // Eh relative to the S+S limit
    double morse_a = 0;    // 1/a0
    double switch_radius = 0;
    double blend_halfwidth = 0;

    std::shared_ptr<const CubicSpline> table;
    double table_rmin = 0, table_rmax = 0;
    double tail_c6 = 0; // refitted for tabulated continuation

    double value(double r) const;
    double derivative(double r) const;

    double morse_value(double r) const;
    double tail_value(double r) const;
};

// Solve the Morse/long-range joint for one Table-of-constants record.
// de is in hartree here; conversion happens at the config boundary.
PecModel build_pec(std::string name, double re, double de, double c4, double c6,
                   double threshold);

// One R-dependent coupling (or diagonal shift) of the body-frame matrix.
struct SocModel {
    enum class Shape { constant, tanh_switch, tabulated, swap_blend };

    int i = 0, j = 0; // state indices 1..16, i <= j
    Shape shape = Shape::constant;
    double asymptotic_value = 0; // Eh
    double amplitude = 0;        // Eh, short-range value for tanh_switch
    double center = 0, width = 1; // a0

    std::shared_ptr<const CubicSpline> table;
    double table_rmin = 0, table_rmax = 0;

    // swap_blend: this curve follows `far` beyond r_swap and `near` inside,
    // with a smooth exchange of width blend_width.
    std::shared_ptr<const SocModel> swap_near, swap_far;
    double swap_radius = 0, swap_width = 1;

    double value(double r) const;
};

// Smoothly exchanged pair: far left of r_swap the first returned model takes
// the raw values of b (and vice versa); far right each keeps its own.
std::pair<SocModel, SocModel> diabatize_swap(const SocModel& a, const SocModel& b,
                                             double r_swap, double blend_width);

// Gaussian coupling between the two excited 1Sigma+ states.
struct X1Coupling {
    double w = 0;     // Eh
    double rc = 0;    // a0
    double delta = 1; // a0
    double value(double r) const;
};

struct CrossingDiagnostic {
    std::string label;     // "X1" or "X3"
    double r = 0;          // fitted crossing radius, a0
    double energy = 0;     // fitted crossing energy, Eh relative to S+S
    double ref_r = 0;      // reference radius
    double ref_energy_ss = 0; // reference energy read as relative to S+S
    bool found = false;
};

// Ingestion of two-column "R value" text tables ('#' comments allowed).
// Throws IngestionError naming the offending line on malformed input.
PecModel load_tabulated_pec(const std::string& path, std::string name, double c4,
                            double threshold);
SocModel load_tabulated_soc(const std::string& path, int i, int j);

// Plain-data description of a surface, the unit the config file overrides.
// Intra-S+D spin-orbit entries not listed explicitly are generated
// automatically at the atomic values implied by the splitting.
struct PecSpec {
    std::string name; // one of the nine canonical curve names
    double re = 0;
    double de_cm1 = 0;
    double c6 = 0;
    double c4 = 82.2;
    std::string table_path; // tabulated form when nonempty
};

struct SocSpec {
    int i = 0, j = 0;
    std::string shape = "tanh-switch"; // constant | tanh-switch | tabulated
    double value_cm1 = 0;              // constant shape / asymptote
    double amplitude_cm1 = 0;          // tanh short-range value
    double center = 10.0, width = 1.5; // a0
    std::string table_path;
    int swap_with_i = 0, swap_with_j = 0; // optional diabatized exchange
    double swap_radius = 0, swap_width = 1.0;
};

struct SurfaceSpec {
    double mu = 10481.62;
    double c4 = 82.2;
    double ion_s_cm1 = 1452.212;
    double sd32_cm1 = 4873.852;
    double d_splitting_cm1 = 800.955;
    std::vector<PecSpec> pecs;
    std::vector<SocSpec> socs;
    bool auto_intra_soc = true;
    double x1_w_au = 0.001795;
    double x1_rc = 11.06;
    double x1_delta = 0.75;
};

SurfaceSpec default_surface_spec();

// The full 16-state surface: diagonal curves, spin-orbit couplings, and the
// gaussian X1 coupling, evaluable at any R. Immutable after construction and
// safe for concurrent reads.
class PotentialSurfaceSet {
  public:
    PotentialSurfaceSet(double reduced_mass, double system_c4, ThresholdSet thresholds,
                        std::vector<PecModel> curves, std::array<std::string, 16> curve_of_state,
                        std::vector<SocModel> socs, X1Coupling x1);

    // Model defaults: fitted constants for the nine spin-free curves,
    // constant intra-S+D spin-orbit at the atomic values implied by the
    // d-state splitting, tanh-switch inter-asymptote couplings, gaussian X1.
    static PotentialSurfaceSet default_model();

    static PotentialSurfaceSet build(const SurfaceSpec& spec);

    double reduced_mass() const { return mu_; }
    double entrance_c4() const { return c4_; }
    const ThresholdSet& thresholds() const { return thresholds_; }

    double pec(int state, double r) const; // diagonal curve only, no SOC shift
    double x1_gaussian(double r) const { return x1_.value(r); }
    const X1Coupling& x1() const { return x1_; }
    double soc_value(int i, int j, double r) const;
    const std::vector<SocModel>& socs() const { return socs_; }

    // Full 16x16 symmetric body-frame matrix at one radius.
    Eigen::MatrixXd bf_matrix(double r) const;

    // Restriction to a ket subset (1-based state indices), written into `out`
    // (resized as needed). Reentrant.
    void case_a_block_into(const std::vector<int>& kets, double r, Eigen::MatrixXd& out) const;

    const std::vector<std::string>& warnings() const { return warnings_; }
    const std::vector<CrossingDiagnostic>& crossing_diagnostics() const { return crossings_; }

    // Modified copies used by diagnostics and tests.
    PotentialSurfaceSet with_zeroed_soc_pairs(const std::vector<std::pair<int, int>>& pairs) const;
    PotentialSurfaceSet without_inter_asymptote_soc() const;
    PotentialSurfaceSet without_soc() const;
    PotentialSurfaceSet without_x1() const;

    const PecModel& curve(const std::string& name) const;
    const PecModel& curve_of_state(int state) const;

  private:
    void run_crossing_diagnostics();

    double mu_;
    double c4_;
    ThresholdSet thresholds_;
    std::vector<PecModel> curves_;
    std::array<int, 16> curve_index_{};
    std::vector<SocModel> socs_;
    X1Coupling x1_;
    std::vector<std::string> warnings_;
    std::vector<CrossingDiagnostic> crossings_;
};

// Eigenvalue curves of the body-frame matrix per omega block (case (c)) or
// of the rotating case (e) block, continuity-tracked along the grid by
// eigenvector overlap.
struct AdiabatSet {
    std::vector<double> grid;
    std::vector<std::string> labels;
    Eigen::MatrixXd curves; // labels.size() x grid.size()
};

AdiabatSet adiabats_case_c(const PotentialSurfaceSet& s, const std::vector<double>& grid);
AdiabatSet adiabats_case_e(const PotentialSurfaceSet& s, int J, int parity,
                           const std::vector<double>& grid);

// Case (e) potential block (frame-transformed matrix plus centrifugal term).
Eigen::MatrixXd case_e_matrix(const PotentialSurfaceSet& s, const FrameTransform& ft, double r,
                              bool include_centrifugal = true);

} // namespace atomion
