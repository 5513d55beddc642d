#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "atomion/potentials.hpp"

namespace atomion {

// Riccati-Bessel pair j^ = x j_l(x), n^ = x y_l(x) and radial derivatives.
// Wronskian convention: j^ n^' - j^' n^ = +1.
struct RiccatiBessel {
    double j, n, jp, np;
};
RiccatiBessel riccati_bessel(int ell, double x);

struct Channel {
    std::string label;
    int ell = 0;
    double threshold = 0; // Eh relative to S+S
};

// One set of coupled radial equations. `potential` fills the symmetric
// matrix V(R) (Eh, thresholds included, centrifugal excluded) in the
// propagation basis; the optional orthogonal `asymptotic_rotation` U maps the
// propagation basis to the matching channels, U^T V(inf) U diagonal. The
// channel list refers to the post-rotation basis.
struct CoupledProblem {
    std::vector<Channel> channels;
    double reduced_mass = 0;
    double energy = 0; // total, Eh relative to S+S
    std::function<void(double, Eigen::MatrixXd&)> potential;
    Eigen::MatrixXd asymptotic_rotation; // empty means identity

    int size() const { return static_cast<int>(channels.size()); }
    bool open(int c) const { return energy > channels[static_cast<std::size_t>(c)].threshold; }
    double wavenumber(int c) const; // k (open) in 1/a0
};

struct PropagationSettings {
    double r_min = 4.0;
    double r_max = 10000.0;
    double step = 0.005;
    bool auto_extend = true;    // grow r_max until the residual test passes
    double match_rel_tol = 1e-3; // |V residual| / E_open at r_max
    double r_max_cap = 4.0e5;
};

// Johnson log-derivative propagation of Y = Psi' Psi^-1 across [r_min, r_max]
// with constant step (even number of intervals required). Returns Y(r_max)
// in the propagation basis.
Eigen::MatrixXd logderiv_propagate(const CoupledProblem& p, double r_min, double r_max,
                                   double step);

struct MatchResult {
    Eigen::MatrixXd K;          // open x open, K = tan(delta) convention
    std::vector<int> open_index; // channel indices of the K/S rows
};

// K matrix from the log-derivative matrix at r_match. Closed channels are
// eliminated against exponentially decaying modified Riccati-Bessel
// solutions before the restriction to the open block.
MatchResult match_asymptotic(const Eigen::MatrixXd& y, const CoupledProblem& p, double r_match);

// Cayley transform S = (I + iK)(I - iK)^-1.
Eigen::MatrixXcd k_to_s(const Eigen::MatrixXd& k);

struct SMatrixBlock {
    double energy = 0; // total Eh
    int J = -1;
    int parity = 0;
    int ell = -1; // set for single-partial-wave (body-frame) blocks
    std::vector<Channel> open_channels;
    std::vector<int> open_index;
    Eigen::MatrixXd K;
    Eigen::MatrixXcd S;
    double r_max_used = 0;

    double unitarity_defect() const;
    double symmetry_defect() const;
};

// Propagate + match + Cayley transform with the stated preconditions
// (forbidden inner wall, even step count, asymptotic residual with automatic
// r_max extension).
SMatrixBlock solve_block(const CoupledProblem& p, const PropagationSettings& s);

// Problem builders against a surface. Energies are total (relative S+S).
CoupledProblem make_fcqs_problem(const PotentialSurfaceSet& surface, int ell, double energy);
CoupledProblem make_mcqs_problem(const PotentialSurfaceSet& surface, int J, int parity,
                                 double energy);

} // namespace atomion
