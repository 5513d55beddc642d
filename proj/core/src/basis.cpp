#include "atomion/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "atomion/angular.hpp"
#include "atomion/errors.hpp"

namespace atomion {

const char* asymptote_name(Asymptote a)
{
    switch (a) {
    case Asymptote::SS: return "S+S";
    case Asymptote::IonS: return "Ion+S";
    case Asymptote::SD: return "S+D";
    }
    return "?";
}

const std::array<HundAState, 16>& case_a_states()
{
    // Index order fixed by the coupling names: G couples states 2 and 3
    // (the two excited 1Sigma+), the X3 spin-orbit element couples 8 and 11.
    static const std::array<HundAState, 16> states = {{
        {1, Asymptote::SS, 0, 0, 0, 0, true, "1Sigma+_0 (S+S)", "1_1Sigma"},
        {2, Asymptote::IonS, 0, 0, 0, 0, true, "1Sigma+_0 (Ion+S)", "2_1Sigma"},
        {3, Asymptote::SD, 0, 0, 0, 0, true, "1Sigma+_0 (S+D)", "3_1Sigma"},
        {4, Asymptote::SD, 2, 1, -1, 0, true, "3Pi_0+", "1_3Pi"},
        {5, Asymptote::SS, 2, 0, 0, 0, false, "3Sigma+_0 (S+S)", "1_3Sigma"},
        {6, Asymptote::SD, 2, 0, 0, 0, false, "3Sigma+_0 (S+D)", "2_3Sigma"},
        {7, Asymptote::SD, 2, 1, -1, 0, false, "3Pi_0-", "1_3Pi"},
        {8, Asymptote::SS, 2, 0, 1, 1, true, "3Sigma+_1 (S+S)", "1_3Sigma"},
        {9, Asymptote::SD, 2, 0, 1, 1, true, "3Sigma+_1 (S+D)", "2_3Sigma"},
        {10, Asymptote::SD, 0, 1, 0, 1, true, "1Pi_1", "1_1Pi"},
        {11, Asymptote::SD, 2, 1, 0, 1, true, "3Pi_1", "1_3Pi"},
        {12, Asymptote::SD, 2, 2, -1, 1, true, "3Delta_1", "1_3Delta"},
        {13, Asymptote::SD, 2, 1, 1, 2, true, "3Pi_2", "1_3Pi"},
        {14, Asymptote::SD, 0, 2, 0, 2, true, "1Delta_2", "1_1Delta"},
        {15, Asymptote::SD, 2, 2, 0, 2, true, "3Delta_2", "1_3Delta"},
        {16, Asymptote::SD, 2, 2, 1, 3, true, "3Delta_3", "1_3Delta"},
    }};
    return states;
}

std::vector<HundAState> enumerate_case_a()
{
    const auto& s = case_a_states();
    return {s.begin(), s.end()};
}

namespace {

struct FineLevelDef {
    Asymptote asym;
    HalfInt ja, jb;
    std::vector<HalfInt> j_values;
};

std::vector<FineLevelDef> fine_levels()
{
    return {
        {Asymptote::SS, half(1), half(1), {HalfInt(0), HalfInt(1)}},
        {Asymptote::IonS, HalfInt(0), HalfInt(0), {HalfInt(0)}},
        {Asymptote::SD, half(1), half(3), {HalfInt(1), HalfInt(2)}},
        {Asymptote::SD, half(1), half(5), {HalfInt(2), HalfInt(3)}},
    };
}

double level_threshold(const FineLevelDef& lv, const ThresholdSet& th)
{
    if (lv.asym == Asymptote::SS) return 0.0;
    if (lv.asym == Asymptote::IonS) return th.ion_s;
    return lv.jb.twice() == 3 ? th.sd32 : th.sd52;
}

// Parity of a channel is (-1)^(La+Lb+ell); La+Lb is even for all three
// limits here, so it reduces to (-1)^ell.
bool parity_match(int ell, int parity) { return ((ell % 2 == 0) ? 1 : -1) == parity; }

} // namespace

std::vector<HundEChannel> enumerate_case_e(int J, int parity, const ThresholdSet& th)
{
    if (J < 0) throw ConfigError("enumerate_case_e: J must be >= 0");
    std::vector<HundEChannel> out;
    for (const auto& lv : fine_levels()) {
        const double thr = level_threshold(lv, th);
        for (HalfInt j : lv.j_values) {
            const int lmin = std::abs(J - j.as_int());
            const int lmax = J + j.as_int();
            for (int ell = lmin; ell <= lmax; ++ell) {
                if (!parity_match(ell, parity)) continue;
                out.push_back({lv.asym, lv.ja, lv.jb, j, ell, J, parity, thr});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const HundEChannel& a, const HundEChannel& b) {
        if (a.threshold != b.threshold) return a.threshold < b.threshold;
        if (a.j != b.j) return a.j < b.j;
        return a.ell < b.ell;
    });
    return out;
}

std::vector<int> symmetrized_case_a_basis(int J, int parity)
{
    if (J < 0) throw ConfigError("symmetrized_case_a_basis: J must be >= 0");
    const bool omega0_plus_active = (J % 2 == 0) == (parity == +1);
    std::vector<int> kets;
    for (const auto& st : case_a_states()) {
        if (st.omega == 0) {
            if (st.omega_plus == omega0_plus_active) kets.push_back(st.index);
        } else if (J >= st.omega) {
            kets.push_back(st.index);
        }
    }
    return kets;
}

namespace {

// Overlap of an unsymmetrized |Lambda S Sigma; J Omega> body-frame ket with
// the space-frame channel |(ja jb) j, ell; J>:
//   sqrt((2l+1)/(2J+1)) <j Om l 0|J Om> <L Lam S Sig|j Om>
//   * sqrt((2L+1)(2S+1)(2ja+1)(2jb+1)) 9j{La Sa ja; Lb Sb jb; L S j}
double element_unsym(const HundEChannel& ch, HalfInt L, HalfInt S, HalfInt lam, HalfInt sig, int J)
{
    const HalfInt om = lam + sig;
    const HalfInt La(0), Sa = half(1);
    const HalfInt Lb = L, Sb = half(1);
    const double c_rot = std::sqrt(double(2 * ch.ell + 1) / double(2 * J + 1)) *
                         clebsch_gordan(ch.j, om, HalfInt(ch.ell), HalfInt(0), HalfInt(J), om);
    if (c_rot == 0.0) return 0.0;
    const double c_els = clebsch_gordan(L, lam, S, sig, ch.j, om);
    if (c_els == 0.0) return 0.0;
    double recouple;
    if (ch.asym == Asymptote::IonS) {
        recouple = 1.0; // both atoms closed-shell
    } else {
        recouple = std::sqrt(double((L.twice() + 1) * (S.twice() + 1) *
                                    (ch.ja.twice() + 1) * (ch.jb.twice() + 1))) *
                   wigner9j(La, Sa, ch.ja, Lb, Sb, ch.jb, L, S, ch.j);
    }
    return c_rot * c_els * recouple;
}

Asymptote state_level_asym(const HundAState& st) { return st.asym; }

bool channel_matches_state_asymptote(const HundEChannel& ch, const HundAState& st)
{
    return ch.asym == state_level_asym(st);
}

} // namespace

FrameTransform frame_transform(int J, int parity, const ThresholdSet& th)
{
    FrameTransform ft;
    ft.J = J;
    ft.parity = parity;
    ft.rows = enumerate_case_e(J, parity, th);
    ft.cols = symmetrized_case_a_basis(J, parity);
    const int ne = static_cast<int>(ft.rows.size());
    const int na = static_cast<int>(ft.cols.size());
    ft.matrix = Eigen::MatrixXd::Zero(ne, na);

    const int p_int = (parity == +1) ? 0 : 1;
    const auto& states = case_a_states();
    for (int col = 0; col < na; ++col) {
        const HundAState& st = states[static_cast<std::size_t>(ft.cols[col] - 1)];
        const HalfInt L(st.L()), S = st.S();
        const HalfInt lam(st.lambda), sig(st.sigma);
        const bool sigma_zero = st.lambda == 0 && st.sigma == 0;
        const double norm = sigma_zero ? 1.0 : 1.0 / std::sqrt(2.0);
        const int s_ket = (((J - st.spin2 / 2 + p_int) % 2 + 2) % 2 == 0) ? 1 : -1;
        for (int row = 0; row < ne; ++row) {
            const HundEChannel& ch = ft.rows[row];
            if (!channel_matches_state_asymptote(ch, st)) continue;
            double v = element_unsym(ch, L, S, lam, sig, J);
            if (!sigma_zero) v += s_ket * element_unsym(ch, L, S, -lam, -sig, J);
            ft.matrix(row, col) = norm * v;
        }
    }
    return ft;
}

Eigen::MatrixXd asymptotic_soc_matrix(double zeta)
{
    // Back-transform the diagonal fine-structure shifts from two (J, +)
    // blocks that together cover all 16 kets. Entries shared by both blocks
    // agree because the electronic operator is independent of (J, parity).
    const ThresholdSet canon{1e-3, 2e-3, 2e-3 + 2.5e-4};
    Eigen::MatrixXd soc = Eigen::MatrixXd::Zero(16, 16);
    Eigen::MatrixXd filled = Eigen::MatrixXd::Zero(16, 16);
    for (int J : {8, 9}) {
        const FrameTransform ft = frame_transform(J, +1, canon);
        const int n = static_cast<int>(ft.rows.size());
        Eigen::VectorXd shifts(n);
        for (int i = 0; i < n; ++i) {
            const auto& ch = ft.rows[i];
            shifts(i) = ch.sd52() ? zeta : (ch.sd32() ? -1.5 * zeta : 0.0);
        }
        const Eigen::MatrixXd block =
            ft.matrix.transpose() * shifts.asDiagonal() * ft.matrix;
        for (int a = 0; a < static_cast<int>(ft.cols.size()); ++a) {
            for (int b = 0; b < static_cast<int>(ft.cols.size()); ++b) {
                const int ia = ft.cols[static_cast<std::size_t>(a)] - 1;
                const int ib = ft.cols[static_cast<std::size_t>(b)] - 1;
                if (filled(ia, ib) != 0.0 && std::abs(block(a, b) - soc(ia, ib)) > 1e-10 * std::max(1.0, std::abs(zeta)))
                    throw PhysicsError("asymptotic_soc_matrix: inconsistent back-transform between J blocks");
                soc(ia, ib) = block(a, b);
                filled(ia, ib) = 1.0;
            }
        }
    }
    return soc;
}

} // namespace atomion
