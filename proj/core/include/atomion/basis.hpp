#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "atomion/half_int.hpp"

namespace atomion {

// The three dissociation limits: ground atom + ground ion, charge-exchanged
// pair, and metastable d-state ion + ground atom.
enum class Asymptote { SS, IonS, SD };

const char* asymptote_name(Asymptote a);

// Fine-structure thresholds in hartree, relative to the S+S limit.
struct ThresholdSet {
    double ion_s;
    double sd32;
    double sd52;

    // One-electron spin-orbit constant of the d ion implied by the splitting.
    double zeta() const { return (sd52 - sd32) / 2.5; }
    // Spin-free (fine-structure-averaged) position of the S+D limit.
    double sd_spinfree() const { return sd32 + 1.5 * zeta(); }
};

// One of the 16 body-frame electronic states. Lambda/sigma give the
// representative component with Lambda + sigma = omega >= 0; states in the
// omega = 0 blocks are reflection-adapted combinations (0+ or 0-).
struct HundAState {
    int index;      // 1..16, canonical order
    Asymptote asym;
    int spin2;      // 2S: 0 (singlet) or 2 (triplet)
    int lambda;     // representative Lambda >= 0
    int sigma;      // representative Sigma with Lambda + Sigma = omega
    int omega;      // |Omega|
    bool omega_plus; // 0+ vs 0- for omega == 0; true for omega >= 1
    std::string term;
    std::string pec_name; // which of the 9 distinct spin-free curves

    HalfInt S() const { return half(spin2); }
    int L() const { return asym == Asymptote::SD ? 2 : 0; }
};

// All 16 states in canonical index order (index 1 at position 0).
const std::array<HundAState, 16>& case_a_states();

std::vector<HundAState> enumerate_case_a();

// Space-frame channel |ja jb j, ell; J parity> valid at large distance.
struct HundEChannel {
    Asymptote asym;
    HalfInt ja, jb, j;
    int ell;
    int J;
    int parity;       // +1 or -1
    double threshold; // hartree, relative to S+S

    bool sd52() const { return asym == Asymptote::SD && jb.twice() == 5; }
    bool sd32() const { return asym == Asymptote::SD && jb.twice() == 3; }
};

// All channels for a (J, parity) block, sorted by (threshold, j, ell).
std::vector<HundEChannel> enumerate_case_e(int J, int parity, const ThresholdSet& th);

// Indices (1..16) of the symmetrized body-frame kets participating in a
// (J, parity) block: omega = 0 blocks alternate with J parity, and omega >= 1
// states require J >= omega.
std::vector<int> symmetrized_case_a_basis(int J, int parity);

// Orthogonal transformation between the case (e) channels (rows) and the
// symmetrized case (a) kets (cols) of one (J, parity) block.
struct FrameTransform {
    int J;
    int parity;
    std::vector<HundEChannel> rows;
    std::vector<int> cols; // HundAState indices
    Eigen::MatrixXd matrix;
};

FrameTransform frame_transform(int J, int parity, const ThresholdSet& th);

// 16x16 matrix of the atomic spin-orbit operator at infinite separation in
// the case (a) basis, obtained by back-transforming the diagonal
// fine-structure shifts (+zeta for j_d = 5/2, -1.5 zeta for 3/2) from the
// case (e) representation. zeta in hartree.
Eigen::MatrixXd asymptotic_soc_matrix(double zeta);

} // namespace atomion
