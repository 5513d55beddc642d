#pragma once

#include <string>
#include <vector>

#include "atomion/propagator.hpp"

namespace atomion {

// Exit-channel classification relative to the prepared entrance level.
// FSE is the endothermic 3/2 -> 5/2 counterpart of FSQ, open only above the
// upper fine-structure threshold.
enum class Process { EC, FSQ, FSE, NRQ, NRCE };
const char* process_name(Process p);

enum class Entrance { D32, D52 };
const char* entrance_name(Entrance e);

enum class Group { SS, IonS, SD32, SD52 };

Group classify_group(double threshold, const ThresholdSet& th);
Group entrance_group(Entrance e);
Process classify_process(Group in, Group out);

struct ProcessSums {
    double ec = 0, fsq = 0, fse = 0, nrq = 0, nrce = 0;
    double& of(Process p);
    double of(Process p) const;
};

// sigma(E, J, p; f) for every process from one solved block: (pi/k_i^2) times
// the double sum over entrance-group channels and exit channels. Elastic
// terms use |delta - S|^2. With divide_entrance_degeneracy the sums are
// divided by the (2ja+1)(2jb+1) degeneracy of the entrance level instead of
// being left as printed.
ProcessSums block_process_sums(const SMatrixBlock& b, const ThresholdSet& th, Entrance ent,
                               bool divide_entrance_degeneracy);

struct XsecSettings {
    Entrance entrance = Entrance::D52;
    PropagationSettings prop;
    double sum_rel_tol = 1e-4; // partial-wave / J tail criterion
    int j_margin = 8;
    int j_cap = 80;
    int ell_cap = 400;
    bool divide_entrance_degeneracy = false;
};

// Classical capture estimate of the highest contributing partial wave.
int langevin_j_estimate(double mu, double c4, double e_coll);

// Four-channel (shared-l, omega=0+ block) cross section, summed over
// partial waves until the last three contribute below tolerance each.
double fcqs_cross_section(const PotentialSurfaceSet& s, double e_coll, Process proc,
                          const XsecSettings& opt);

// Single (J, parity) block cross section at collision energy e_coll above
// the entrance threshold.
double mcqs_block_cross_section(const PotentialSurfaceSet& s, double e_coll, int J, int parity,
                                Process proc, const XsecSettings& opt);

// Sum over J with (2J+1) weights, then the parity mean.
double parity_cross_section(const PotentialSurfaceSet& s, double e_coll, int parity,
                            Process proc, const XsecSettings& opt);
double total_cross_section(const PotentialSurfaceSet& s, double e_coll, Process proc,
                           const XsecSettings& opt);

// Langevin capture reference values. e_coll in hartree, c4/mu in au.
double langevin_sigma(double c4, double e_coll);                     // a0^2
double langevin_rate_au(double c4, double mu);                       // a0^3/t_au
double langevin_rate_thermal(double c4, double mu, double t_eff_K);  // cm^3/s
double langevin_rate_density(double c4, double mu, double n_cm3);    // 1/s

// Mass-weighted two-species collision temperature.
double t_eff(double ma_u, double ta_K, double mb_u, double tb_K);

// Energy-dependent rate K(E) on an ascending grid, thermalized by the
// Maxwell-Boltzmann integral on a fixed 48-node half-integer Gauss-Laguerre
// rule with monotone-cubic interpolation in log E.
struct RateCurve {
    std::vector<double> energy_K;
    std::vector<double> rate_cm3s;
    double thermal(double t_K) const;
};

enum class LangevinAverage { capped, plain };
double langevin_average(const RateCurve& k, double t_K, double c4, double mu,
                        LangevinAverage kind);

// Gaussian-cloud peak density from atom number, radial trap frequency
// (rad/s), axial 1/e width (m) and temperature (K); returns cm^-3.
double atom_density_cm3(double n_atoms, double omega_rad_s, double sigma_ax_m, double t_K);

struct CorrectedFraction {
    double value = 0;
    bool out_of_range = false;
};
// Rescale a measured product fraction for imperfect upper-level preparation.
CorrectedFraction d52_preparation_correction(double measured_fraction, double leak = 0.175);

std::vector<double> survival_curve(double k_total_cm3s, double n_cm3,
                                   const std::vector<double>& t_grid_s);

} // namespace atomion
