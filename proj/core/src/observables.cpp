#include "atomion/observables.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "atomion/errors.hpp"
#include "atomion/math_util.hpp"
#include "atomion/units.hpp"

namespace atomion {

const char* process_name(Process p)
{
    switch (p) {
    case Process::EC: return "EC";
    case Process::FSQ: return "FSQ";
    case Process::FSE: return "FSE";
    case Process::NRQ: return "NRQ";
    case Process::NRCE: return "NRCE";
    }
    return "?";
}

const char* entrance_name(Entrance e) { return e == Entrance::D32 ? "5D32" : "5D52"; }

Group classify_group(double threshold, const ThresholdSet& th)
{
    const double cands[4] = {0.0, th.ion_s, th.sd32, th.sd52};
    const Group groups[4] = {Group::SS, Group::IonS, Group::SD32, Group::SD52};
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(threshold - cands[i]) < std::abs(threshold - cands[best])) best = i;
    return groups[best];
}

Group entrance_group(Entrance e) { return e == Entrance::D32 ? Group::SD32 : Group::SD52; }

Process classify_process(Group in, Group out)
{
    if (in == out) return Process::EC;
    if (out == Group::SS) return Process::NRQ;
    if (out == Group::IonS) return Process::NRCE;
    // remaining: fine-structure change within S+D
    return (in == Group::SD52 && out == Group::SD32) ? Process::FSQ : Process::FSE;
}

double& ProcessSums::of(Process p)
{
    switch (p) {
    case Process::EC: return ec;
    case Process::FSQ: return fsq;
    case Process::FSE: return fse;
    case Process::NRQ: return nrq;
    case Process::NRCE: return nrce;
    }
    return ec;
}

double ProcessSums::of(Process p) const { return const_cast<ProcessSums*>(this)->of(p); }

ProcessSums block_process_sums(const SMatrixBlock& b, const ThresholdSet& th, Entrance ent,
                               bool divide_entrance_degeneracy)
{
    ProcessSums out;
    const Group gin = entrance_group(ent);
    const int no = static_cast<int>(b.open_channels.size());
    std::vector<Group> grp(static_cast<std::size_t>(no));
    for (int c = 0; c < no; ++c)
        grp[static_cast<std::size_t>(c)] = classify_group(b.open_channels[static_cast<std::size_t>(c)].threshold, th);

    bool have_entrance = false;
    for (int c = 0; c < no; ++c)
        if (grp[static_cast<std::size_t>(c)] == gin) have_entrance = true;
    if (!have_entrance) return out; // entrance manifold closed in this block

    for (int i = 0; i < no; ++i) {
        if (grp[static_cast<std::size_t>(i)] != gin) continue;
        for (int f = 0; f < no; ++f) {
            const Process p = classify_process(gin, grp[static_cast<std::size_t>(f)]);
            double t2;
            if (p == Process::EC) {
                const std::complex<double> d = (i == f ? 1.0 : 0.0) - b.S(f, i);
                t2 = std::norm(d);
            } else {
                t2 = std::norm(b.S(f, i));
            }
            out.of(p) += t2;
        }
    }
    if (divide_entrance_degeneracy) {
        const double g = (ent == Entrance::D32) ? 8.0 : 12.0;
        for (Process p : {Process::EC, Process::FSQ, Process::FSE, Process::NRQ, Process::NRCE})
            out.of(p) /= g;
    }
    return out;
}

int langevin_j_estimate(double mu, double c4, double e_coll)
{
    if (e_coll <= 0) return 0;
    return static_cast<int>(std::ceil(std::pow(4.0 * mu * mu * c4 * e_coll, 0.25)));
}

namespace {

double entrance_threshold(const PotentialSurfaceSet& s, Entrance ent)
{
    return ent == Entrance::D32 ? s.thresholds().sd32 : s.thresholds().sd52;
}

// pi/k_i^2 prefactor in a0^2.
double sigma_prefactor(const PotentialSurfaceSet& s, double e_coll)
{
    const double k2 = 2.0 * s.reduced_mass() * e_coll;
    return M_PI / k2;
}

struct TailChecker {
    double tol;
    std::deque<double> last;
    void push(double contribution)
    {
        last.push_back(std::abs(contribution));
        if (last.size() > 3) last.pop_front();
    }
    bool converged(double total) const
    {
        if (last.size() < 3) return false;
        for (double v : last)
            if (v > tol * std::abs(total)) return false;
        return true;
    }
};

} // namespace

double fcqs_cross_section(const PotentialSurfaceSet& s, double e_coll, Process proc,
                          const XsecSettings& opt)
{
    if (e_coll <= 0) throw BelowThresholdError("fcqs_cross_section: energy below entrance threshold");
    const double e_total = e_coll + entrance_threshold(s, opt.entrance);
    const int lmin_converge = langevin_j_estimate(s.reduced_mass(), s.entrance_c4(), e_coll);

    double total = 0;
    TailChecker tail{opt.sum_rel_tol, {}};
    for (int ell = 0; ell <= opt.ell_cap; ++ell) {
        const CoupledProblem p = make_fcqs_problem(s, ell, e_total);
        SMatrixBlock b = solve_block(p, opt.prop);
        b.ell = ell;
        const ProcessSums sums = block_process_sums(b, s.thresholds(), opt.entrance,
                                                    opt.divide_entrance_degeneracy);
        const double contrib = (2.0 * ell + 1.0) * sums.of(proc);
        total += contrib;
        tail.push(contrib);
        if (ell >= lmin_converge && tail.converged(std::max(std::abs(total), 1e-300))) break;
        if (ell == opt.ell_cap) {
            const double est = tail.last.empty() ? 0.0 : tail.last.back();
            throw ConvergenceError(
                "fcqs_cross_section: partial-wave sum not converged at ell cap; last tail term " +
                std::to_string(est));
        }
    }
    return sigma_prefactor(s, e_coll) * total;
}

double mcqs_block_cross_section(const PotentialSurfaceSet& s, double e_coll, int J, int parity,
                                Process proc, const XsecSettings& opt)
{
    if (e_coll <= 0) throw BelowThresholdError("mcqs_block_cross_section: energy below threshold");
    const double e_total = e_coll + entrance_threshold(s, opt.entrance);
    const CoupledProblem p = make_mcqs_problem(s, J, parity, e_total);
    SMatrixBlock b = solve_block(p, opt.prop);
    b.J = J;
    b.parity = parity;
    const ProcessSums sums = block_process_sums(b, s.thresholds(), opt.entrance,
                                                opt.divide_entrance_degeneracy);
    return sigma_prefactor(s, e_coll) * sums.of(proc);
}

double parity_cross_section(const PotentialSurfaceSet& s, double e_coll, int parity,
                            Process proc, const XsecSettings& opt)
{
    if (e_coll <= 0) throw BelowThresholdError("parity_cross_section: energy below threshold");
    const int jmin_converge =
        langevin_j_estimate(s.reduced_mass(), s.entrance_c4(), e_coll) + opt.j_margin;
    double total = 0;
    TailChecker tail{opt.sum_rel_tol, {}};
    for (int J = 0; J <= opt.j_cap; ++J) {
        const double sig = mcqs_block_cross_section(s, e_coll, J, parity, proc, opt);
        const double contrib = (2.0 * J + 1.0) * sig;
        total += contrib;
        tail.push(contrib);
        if (J >= jmin_converge && tail.converged(std::max(std::abs(total), 1e-300))) return total;
    }
    throw ConvergenceError("parity_cross_section: J sum not converged at cap; partial sum " +
                           std::to_string(total));
}

double total_cross_section(const PotentialSurfaceSet& s, double e_coll, Process proc,
                           const XsecSettings& opt)
{
    return 0.5 * (parity_cross_section(s, e_coll, +1, proc, opt) +
                  parity_cross_section(s, e_coll, -1, proc, opt));
}

double langevin_sigma(double c4, double e_coll)
{
    return 2.0 * M_PI * std::sqrt(c4 / e_coll);
}

double langevin_rate_au(double c4, double mu) { return 2.0 * M_PI * std::sqrt(2.0 * c4 / mu); }

double langevin_rate_thermal(double c4, double mu, double t_eff_K)
{
    (void)t_eff_K; // sigma_L * sqrt(2 k T / mu) is temperature-independent
    return langevin_rate_au(c4, mu) * units::au_rate_in_cm3_per_s;
}

double langevin_rate_density(double c4, double mu, double n_cm3)
{
    const double bohr3 = units::bohr_in_cm * units::bohr_in_cm * units::bohr_in_cm;
    const double n_au = n_cm3 * bohr3;
    return 2.0 * M_PI * n_au * std::sqrt(2.0 * c4 / mu) / units::au_time_in_s;
}

double t_eff(double ma_u, double ta_K, double mb_u, double tb_K)
{
    if (ma_u <= 0 || mb_u <= 0 || ta_K <= 0 || tb_K <= 0)
        throw ConfigError("t_eff: masses and temperatures must be positive");
    return (ma_u * tb_K + mb_u * ta_K) / (ma_u + mb_u);
}

double RateCurve::thermal(double t_K) const
{
    if (energy_K.size() < 2 || energy_K.size() != rate_cm3s.size())
        throw ConfigError("RateCurve::thermal: need a rate grid");
    static const Quadrature quad = gauss_laguerre_half(48);
    for (double x : quad.nodes) {
        const double e = x * t_K;
        if (e < energy_K.front() || e > energy_K.back())
            throw CoverageError("RateCurve::thermal: grid does not span the quadrature support at T=" +
                                std::to_string(t_K) + " K");
    }
    std::vector<double> loge(energy_K.size());
    for (std::size_t i = 0; i < energy_K.size(); ++i) loge[i] = std::log(energy_K[i]);
    const MonotoneCubic interp(loge, rate_cm3s);
    double acc = 0;
    for (std::size_t i = 0; i < quad.nodes.size(); ++i)
        acc += quad.weights[i] * interp(std::log(quad.nodes[i] * t_K));
    return 2.0 / std::sqrt(M_PI) * acc;
}

double langevin_average(const RateCurve& k, double t_K, double c4, double mu,
                        LangevinAverage kind)
{
    if (kind == LangevinAverage::plain) return k.thermal(t_K);
    const double kl = langevin_rate_thermal(c4, mu, t_K);
    RateCurve capped = k;
    for (double& v : capped.rate_cm3s) v = std::min(v, kl);
    return capped.thermal(t_K);
}

double atom_density_cm3(double n_atoms, double omega_rad_s, double sigma_ax_m, double t_K)
{
    if (n_atoms <= 0 || omega_rad_s <= 0 || sigma_ax_m <= 0 || t_K <= 0)
        throw ConfigError("atom_density_cm3: all inputs must be positive");
    constexpr double m_li_kg = 6.0151228 * 1.66053906660e-27;
    constexpr double k_b = 1.380649e-23;
    const double per_m3 = std::pow(2.0 * M_PI, -1.5) * m_li_kg * omega_rad_s * omega_rad_s /
                          (k_b * t_K * sigma_ax_m) * n_atoms;
    return per_m3 * 1e-6;
}

CorrectedFraction d52_preparation_correction(double measured_fraction, double leak)
{
    if (measured_fraction < 0 || measured_fraction > 1 || leak < 0 || leak >= 1)
        throw ConfigError("d52_preparation_correction: fraction in [0,1], leak in [0,1)");
    CorrectedFraction out;
    out.value = measured_fraction / (1.0 - leak);
    out.out_of_range = out.value > 1.0;
    return out;
}

std::vector<double> survival_curve(double k_total_cm3s, double n_cm3,
                                   const std::vector<double>& t_grid_s)
{
    if (k_total_cm3s < 0 || n_cm3 < 0)
        throw ConfigError("survival_curve: rate and density must be nonnegative");
    std::vector<double> out;
    out.reserve(t_grid_s.size());
    for (double t : t_grid_s) out.push_back(std::exp(-k_total_cm3s * n_cm3 * t));
    return out;
}

} // namespace atomion
