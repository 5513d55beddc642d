#include "atomion/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <Eigen/Dense>

#include "atomion/errors.hpp"
#include "atomion/units.hpp"

namespace atomion {

double PecModel::morse_value(double r) const
{
    const double e = std::exp(-morse_a * (r - re));
    const double u = 1.0 - e;
    return threshold + de * (u * u - 1.0);
}

double PecModel::tail_value(double r) const
{
    const double r2 = r * r;
    const double r4 = r2 * r2;
    const double c6eff = (form == Form::tabulated_spline) ? tail_c6 : c6;
    return threshold - c4 / r4 - c6eff / (r4 * r2);
}

double PecModel::value(double r) const
{
    if (form == Form::tabulated_spline) {
        if (r > table_rmax) return tail_value(r);
        if (r < table_rmin)
            return (*table)(table_rmin) + table->derivative(table_rmin) * (r - table_rmin);
        return (*table)(r);
    }
    const double t0 = switch_radius - blend_halfwidth;
    const double t1 = switch_radius + blend_halfwidth;
    if (r <= t0) return morse_value(r);
    if (r >= t1) return tail_value(r);
    const double g = smoothstep((r - t0) / (t1 - t0));
    return (1.0 - g) * morse_value(r) + g * tail_value(r);
}

double PecModel::derivative(double r) const
{
    if (form == Form::tabulated_spline) {
        if (r > table_rmax) {
            const double r2 = r * r;
            return 4.0 * c4 / (r2 * r2 * r) + 6.0 * tail_c6 / (r2 * r2 * r2 * r);
        }
        if (r < table_rmin) return table->derivative(table_rmin);
        return table->derivative(r);
    }
    const double e = std::exp(-morse_a * (r - re));
    const double dmorse = 2.0 * de * (1.0 - e) * morse_a * e;
    const double r2 = r * r;
    const double dtail = 4.0 * c4 / (r2 * r2 * r) + 6.0 * c6 / (r2 * r2 * r2 * r);
    const double t0 = switch_radius - blend_halfwidth;
    const double t1 = switch_radius + blend_halfwidth;
    if (r <= t0) return dmorse;
    if (r >= t1) return dtail;
    const double t = (r - t0) / (t1 - t0);
    const double g = smoothstep(t);
    const double gp = 30.0 * t * t * (t - 1.0) * (t - 1.0) / (t1 - t0);
    return (1.0 - g) * dmorse + g * dtail + gp * (tail_value(r) - morse_value(r));
}

PecModel build_pec(std::string name, double re, double de, double c4, double c6,
                   double threshold)
{
    if (de <= 0 || re <= 0 || c4 <= 0)
        throw ModelFitError("build_pec(" + name + "): need positive De, Re, C4");

    PecModel pec;
    pec.name = std::move(name);
    pec.form = PecModel::Form::morse_longrange;
    pec.re = re;
    pec.de = de;
    pec.c4 = c4;
    pec.c6 = c6;
    pec.threshold = threshold;

    // Blend center: beyond the well and beyond the radius where the C6 term
    // overtakes C4 (inside that radius the truncated tail is unphysical).
    const double crossover = c6 < 0 ? std::sqrt(-c6 / c4) : 0.0;
    double rc = std::max(re + 1.0, 1.25 * crossover);
    double v = 0;
    bool ok = false;
    for (; rc < 200.0; rc += 0.5) {
        v = pec.tail_value(rc) - threshold;
        if (v < -1e-12 && v > -0.95 * de) {
            ok = true;
            break;
        }
    }
    if (!ok) {
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "build_pec(%s): no blend center with tail in (-0.95 De, 0); "
                      "Re=%.3f De=%.3e C4=%.2f C6=%.2f",
                      pec.name.c_str(), re, de, c4, c6);
        throw ModelFitError(buf);
    }
    const double x = 1.0 - std::sqrt(1.0 + v / de);
    if (!(x > 0.0 && x < 1.0))
        throw ModelFitError("build_pec(" + pec.name + "): Morse branch point out of range");
    pec.morse_a = -std::log(x) / (rc - re);
    pec.switch_radius = rc;
    pec.blend_halfwidth = std::min(2.5, 0.8 * (rc - re));
    return pec;
}

double SocModel::value(double r) const
{
    switch (shape) {
    case Shape::constant:
        return asymptotic_value;
    case Shape::tanh_switch:
        return asymptotic_value +
               (amplitude - asymptotic_value) * 0.5 * (1.0 - std::tanh((r - center) / width));
    case Shape::tabulated:
        if (r <= table_rmin) return (*table)(table_rmin);
        if (r >= table_rmax) return (*table)(table_rmax);
        return (*table)(r);
    case Shape::swap_blend: {
        const double s = smoothstep((r - swap_radius) / swap_width + 0.5);
        return (1.0 - s) * swap_far->value(r) + s * swap_near->value(r);
    }
    }
    return 0.0;
}

std::pair<SocModel, SocModel> diabatize_swap(const SocModel& a, const SocModel& b,
                                             double r_swap, double blend_width)
{
    auto pa = std::make_shared<const SocModel>(a);
    auto pb = std::make_shared<const SocModel>(b);
    SocModel sa = a, sb = b;
    sa.shape = SocModel::Shape::swap_blend;
    sa.swap_near = pa; // own values for R >> r_swap
    sa.swap_far = pb;  // partner values for R << r_swap
    sa.swap_radius = r_swap;
    sa.swap_width = blend_width;
    sb.shape = SocModel::Shape::swap_blend;
    sb.swap_near = pb;
    sb.swap_far = pa;
    sb.swap_radius = r_swap;
    sb.swap_width = blend_width;
    return {sa, sb};
}

double X1Coupling::value(double r) const
{
    const double d = (r - rc) / delta;
    return w * std::exp(-0.5 * d * d);
}

namespace {

std::vector<std::pair<double, double>> parse_two_column(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open table file: " + path);
    std::vector<std::pair<double, double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double r, v;
        if (!(ss >> r)) continue; // blank or comment-only
        if (!(ss >> v))
            throw IngestionError(path + ":" + std::to_string(lineno) + ": expected two columns");
        if (!rows.empty() && r <= rows.back().first)
            throw IngestionError(path + ":" + std::to_string(lineno) +
                                 ": R grid not strictly increasing");
        rows.emplace_back(r, v);
    }
    if (rows.size() < 8)
        throw IngestionError(path + ": need at least 8 samples, got " +
                             std::to_string(rows.size()));
    return rows;
}

std::shared_ptr<const CubicSpline> spline_of(const std::vector<std::pair<double, double>>& rows)
{
    std::vector<double> x(rows.size()), y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        x[i] = rows[i].first;
        y[i] = rows[i].second;
    }
    return std::make_shared<const CubicSpline>(std::move(x), std::move(y));
}

} // namespace

PecModel load_tabulated_pec(const std::string& path, std::string name, double c4,
                            double threshold)
{
    const auto rows = parse_two_column(path);
    PecModel pec;
    pec.name = std::move(name);
    pec.form = PecModel::Form::tabulated_spline;
    pec.c4 = c4;
    pec.threshold = threshold;
    pec.table = spline_of(rows);
    pec.table_rmin = rows.front().first;
    pec.table_rmax = rows.back().first;
    // Continue past the table with the tail; C6 refitted so the value is
    // continuous at the boundary.
    const double rb = pec.table_rmax;
    const double vb = rows.back().second;
    const double r2 = rb * rb;
    pec.tail_c6 = (threshold - vb - c4 / (r2 * r2)) * (r2 * r2 * r2);
    pec.c6 = pec.tail_c6;
    return pec;
}

SocModel load_tabulated_soc(const std::string& path, int i, int j)
{
    const auto rows = parse_two_column(path);
    SocModel soc;
    soc.i = std::min(i, j);
    soc.j = std::max(i, j);
    soc.shape = SocModel::Shape::tabulated;
    soc.table = spline_of(rows);
    soc.table_rmin = rows.front().first;
    soc.table_rmax = rows.back().first;
    soc.asymptotic_value = rows.back().second;
    return soc;
}

PotentialSurfaceSet::PotentialSurfaceSet(double reduced_mass, double system_c4,
                                         ThresholdSet thresholds, std::vector<PecModel> curves,
                                         std::array<std::string, 16> curve_of_state,
                                         std::vector<SocModel> socs, X1Coupling x1)
    : mu_(reduced_mass), c4_(system_c4), thresholds_(thresholds), curves_(std::move(curves)),
      socs_(std::move(socs)), x1_(x1)
{
    if (mu_ <= 0) throw ConfigError("reduced mass must be positive");
    std::map<std::string, int> by_name;
    for (std::size_t k = 0; k < curves_.size(); ++k) by_name[curves_[k].name] = static_cast<int>(k);
    const auto& states = case_a_states();
    for (int s = 0; s < 16; ++s) {
        auto it = by_name.find(curve_of_state[static_cast<std::size_t>(s)]);
        if (it == by_name.end())
            throw ConfigError("no curve named " + curve_of_state[static_cast<std::size_t>(s)] +
                              " for state " + std::to_string(s + 1));
        curve_index_[static_cast<std::size_t>(s)] = it->second;
    }
    // Spin-orbit entries must stay inside one omega block (the matrix is
    // block-diagonal in omega apart from the gaussian element).
    for (auto& soc : socs_) {
        if (soc.i > soc.j) std::swap(soc.i, soc.j);
        if (soc.i < 1 || soc.j > 16) throw ConfigError("SOC pair indices out of range");
        const auto& a = states[static_cast<std::size_t>(soc.i - 1)];
        const auto& b = states[static_cast<std::size_t>(soc.j - 1)];
        if (a.omega != b.omega || (a.omega == 0 && a.omega_plus != b.omega_plus))
            throw ConfigError("SOC pair (" + std::to_string(soc.i) + "," + std::to_string(soc.j) +
                              ") crosses omega blocks");
    }
    run_crossing_diagnostics();
}

const PecModel& PotentialSurfaceSet::curve(const std::string& name) const
{
    for (const auto& c : curves_)
        if (c.name == name) return c;
    throw ConfigError("no curve named " + name);
}

const PecModel& PotentialSurfaceSet::curve_of_state(int state) const
{
    return curves_[static_cast<std::size_t>(curve_index_[static_cast<std::size_t>(state - 1)])];
}

double PotentialSurfaceSet::pec(int state, double r) const
{
    return curve_of_state(state).value(r);
}

double PotentialSurfaceSet::soc_value(int i, int j, double r) const
{
    if (i > j) std::swap(i, j);
    double v = 0;
    for (const auto& soc : socs_)
        if (soc.i == i && soc.j == j) v += soc.value(r);
    return v;
}

Eigen::MatrixXd PotentialSurfaceSet::bf_matrix(double r) const
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(16, 16);
    for (int s = 1; s <= 16; ++s) m(s - 1, s - 1) = pec(s, r);
    for (const auto& soc : socs_) {
        const double v = soc.value(r);
        if (soc.i == soc.j) {
            m(soc.i - 1, soc.i - 1) += v;
        } else {
            m(soc.i - 1, soc.j - 1) += v;
            m(soc.j - 1, soc.i - 1) += v;
        }
    }
    const double g = x1_.value(r);
    m(1, 2) += g;
    m(2, 1) += g;
    return m;
}

void PotentialSurfaceSet::case_a_block_into(const std::vector<int>& kets, double r,
                                            Eigen::MatrixXd& out) const
{
    const int n = static_cast<int>(kets.size());
    out.resize(n, n);
    out.setZero();
    for (int a = 0; a < n; ++a) out(a, a) = pec(kets[static_cast<std::size_t>(a)], r);
    // Off-diagonal entries: scan the SOC list once against a ket lookup.
    std::array<int, 17> pos;
    pos.fill(-1);
    for (int a = 0; a < n; ++a) pos[static_cast<std::size_t>(kets[static_cast<std::size_t>(a)])] = a;
    for (const auto& soc : socs_) {
        const int pa = pos[static_cast<std::size_t>(soc.i)];
        const int pb = pos[static_cast<std::size_t>(soc.j)];
        if (pa < 0 || pb < 0) continue;
        const double v = soc.value(r);
        if (pa == pb) {
            out(pa, pa) += v;
        } else {
            out(pa, pb) += v;
            out(pb, pa) += v;
        }
    }
    const int p2 = pos[2], p3 = pos[3];
    if (p2 >= 0 && p3 >= 0) {
        const double g = x1_.value(r);
        out(p2, p3) += g;
        out(p3, p2) += g;
    }
}

PotentialSurfaceSet PotentialSurfaceSet::with_zeroed_soc_pairs(
    const std::vector<std::pair<int, int>>& pairs) const
{
    auto socs = socs_;
    auto hit = [&pairs](int i, int j) {
        for (auto [a, b] : pairs)
            if ((a == i && b == j) || (a == j && b == i)) return true;
        return false;
    };
    socs.erase(std::remove_if(socs.begin(), socs.end(),
                              [&](const SocModel& s) { return hit(s.i, s.j); }),
               socs.end());
    std::array<std::string, 16> names;
    for (int s = 1; s <= 16; ++s) names[static_cast<std::size_t>(s - 1)] = curve_of_state(s).name;
    return {mu_, c4_, thresholds_, curves_, names, std::move(socs), x1_};
}

PotentialSurfaceSet PotentialSurfaceSet::without_inter_asymptote_soc() const
{
    const auto& states = case_a_states();
    std::vector<std::pair<int, int>> pairs;
    for (const auto& soc : socs_) {
        const auto& a = states[static_cast<std::size_t>(soc.i - 1)];
        const auto& b = states[static_cast<std::size_t>(soc.j - 1)];
        if (a.asym != b.asym) pairs.emplace_back(soc.i, soc.j);
    }
    return with_zeroed_soc_pairs(pairs);
}

PotentialSurfaceSet PotentialSurfaceSet::without_soc() const
{
    std::array<std::string, 16> names;
    for (int s = 1; s <= 16; ++s) names[static_cast<std::size_t>(s - 1)] = curve_of_state(s).name;
    return {mu_, c4_, thresholds_, curves_, names, {}, x1_};
}

PotentialSurfaceSet PotentialSurfaceSet::without_x1() const
{
    std::array<std::string, 16> names;
    for (int s = 1; s <= 16; ++s) names[static_cast<std::size_t>(s - 1)] = curve_of_state(s).name;
    X1Coupling x1 = x1_;
    x1.w = 0.0;
    return {mu_, c4_, thresholds_, curves_, names, socs_, x1};
}

void PotentialSurfaceSet::run_crossing_diagnostics()
{
    using units::cm1_from_hartree;
    struct Ref {
        const char* label;
        const char* curve_a;
        const char* curve_b;
        double r_ref;
        double e_ref_cm1; // read as relative to S+S
        double lo, hi;
    };
    const double e_d = thresholds_.sd_spinfree();
    const Ref refs[] = {
        {"X1", "2_1Sigma", "3_1Sigma", 11.06, 3450.0, 4.2, 30.0},
        {"X3", "1_3Sigma", "1_3Pi", 6.15, -4205.0, 4.2, 12.0},
    };
    for (const auto& ref : refs) {
        const PecModel* a = nullptr;
        const PecModel* b = nullptr;
        for (const auto& c : curves_) {
            if (c.name == ref.curve_a) a = &c;
            if (c.name == ref.curve_b) b = &c;
        }
        CrossingDiagnostic d;
        d.label = ref.label;
        d.ref_r = ref.r_ref;
        d.ref_energy_ss = units::hartree_from_cm1(ref.e_ref_cm1);
        if (a && b) {
            auto f = [&](double r) { return a->value(r) - b->value(r); };
            double best_r = 0;
            bool found = false;
            double prev = f(ref.lo);
            for (double r = ref.lo + 0.01; r <= ref.hi; r += 0.01) {
                const double cur = f(r);
                if (prev == 0.0 || (prev < 0) != (cur < 0)) {
                    const double root = bisect(f, r - 0.01, r);
                    if (!found || std::abs(root - ref.r_ref) < std::abs(best_r - ref.r_ref)) {
                        best_r = root;
                        found = true;
                    }
                }
                prev = cur;
            }
            if (found) {
                d.found = true;
                d.r = best_r;
                d.energy = a->value(best_r);
            }
        }
        if (!d.found) {
            warnings_.push_back(std::string(ref.label) + ": model curves " + ref.curve_a + "/" +
                                ref.curve_b + " do not cross in the search window");
        } else {
            const double e_cm = cm1_from_hartree(d.energy);
            const double alt_cm = cm1_from_hartree(d.energy - e_d); // relative to S+D
            const double dev_r = std::abs(d.r - ref.r_ref) / ref.r_ref;
            const double dev_e = std::min(std::abs(e_cm - ref.e_ref_cm1),
                                          std::abs(alt_cm - ref.e_ref_cm1)) /
                                 std::abs(ref.e_ref_cm1);
            if (dev_r > 0.05 || dev_e > 0.05) {
                char buf[320];
                std::snprintf(buf, sizeof buf,
                              "%s crossing diagnostic: fitted R=%.3f a0, E=%.1f cm-1 above S+S "
                              "(%.1f cm-1 relative to S+D); reference R=%.2f, E=%.1f "
                              "(deviation %.0f%% in R, %.0f%% in E)",
                              ref.label, d.r, e_cm, alt_cm, ref.r_ref, ref.e_ref_cm1,
                              100 * dev_r, 100 * dev_e);
                warnings_.emplace_back(buf);
            }
        }
        crossings_.push_back(d);
    }
}

SurfaceSpec default_surface_spec()
{
    SurfaceSpec spec;
    spec.pecs = {
        {"1_1Sigma", 6.60, 12189.0, -14820.26, 82.2, {}},
        {"2_1Sigma", 7.02, 1580.0, -21744.76, 136.3, {}},
        {"3_1Sigma", 11.20, 1524.0, -2327.73, 82.2, {}},
        {"1_3Sigma", 7.28, 5619.0, -14821.26, 82.2, {}},
        {"2_3Sigma", 7.98, 3905.0, -2327.73, 82.2, {}},
        {"1_1Pi", 7.60, 3915.0, -3180.61, 82.2, {}},
        {"1_3Pi", 6.28, 9589.0, -3180.72, 82.2, {}},
        {"1_1Delta", 7.29, 6473.0, -5686.68, 82.2, {}},
        {"1_3Delta", 7.20, 6477.0, -5686.68, 82.2, {}},
    };
    // Inter-asymptote couplings: short-range tanh switches vanishing at
    // large R. Amplitudes are model inputs; these defaults are plausible
    // fractions of the atomic spin-orbit scale.
    SocSpec s14;
    s14.i = 1, s14.j = 4, s14.amplitude_cm1 = 200.0, s14.center = 9.0, s14.width = 1.5;
    SocSpec s24 = s14;
    s24.i = 2, s24.j = 4;
    SocSpec s57 = s14;
    s57.i = 5, s57.j = 7;
    SocSpec s810 = s14;
    s810.i = 8, s810.j = 10, s810.amplitude_cm1 = 150.0;
    SocSpec s811 = s14;
    s811.i = 8, s811.j = 11, s811.amplitude_cm1 = 250.0, s811.center = 8.5;
    spec.socs = {s14, s24, s57, s810, s811};
    return spec;
}

namespace {

double curve_threshold(const std::string& name, const ThresholdSet& th)
{
    if (name == "1_1Sigma" || name == "1_3Sigma") return 0.0;
    if (name == "2_1Sigma") return th.ion_s;
    if (name == "3_1Sigma" || name == "2_3Sigma" || name == "1_1Pi" || name == "1_3Pi" ||
        name == "1_1Delta" || name == "1_3Delta")
        return th.sd_spinfree();
    throw ConfigError("unknown curve name: " + name);
}

} // namespace

PotentialSurfaceSet PotentialSurfaceSet::build(const SurfaceSpec& spec)
{
    using units::hartree_from_cm1;
    ThresholdSet th;
    th.ion_s = hartree_from_cm1(spec.ion_s_cm1);
    th.sd32 = hartree_from_cm1(spec.sd32_cm1);
    th.sd52 = hartree_from_cm1(spec.sd32_cm1 + spec.d_splitting_cm1);

    std::vector<PecModel> curves;
    for (const auto& p : spec.pecs) {
        const double thr = curve_threshold(p.name, th);
        if (!p.table_path.empty()) {
            curves.push_back(load_tabulated_pec(p.table_path, p.name, p.c4, thr));
        } else {
            curves.push_back(build_pec(p.name, p.re, hartree_from_cm1(p.de_cm1), p.c4, p.c6, thr));
        }
    }
    std::array<std::string, 16> names;
    for (const auto& st : case_a_states()) names[static_cast<std::size_t>(st.index - 1)] = st.pec_name;

    std::vector<SocModel> socs;
    auto overridden = [&spec](int i, int j) {
        for (const auto& s : spec.socs)
            if ((s.i == i && s.j == j) || (s.i == j && s.j == i)) return true;
        return false;
    };
    if (spec.auto_intra_soc) {
        // Intra-S+D couplings and shifts: constant at the atomic values
        // implied by the fine-structure splitting.
        const Eigen::MatrixXd soc_inf = asymptotic_soc_matrix(th.zeta());
        const auto& states = case_a_states();
        for (int i = 1; i <= 16; ++i) {
            for (int j = i; j <= 16; ++j) {
                const auto& a = states[static_cast<std::size_t>(i - 1)];
                const auto& b = states[static_cast<std::size_t>(j - 1)];
                if (a.asym != Asymptote::SD || b.asym != Asymptote::SD) continue;
                if (a.omega != b.omega || (a.omega == 0 && a.omega_plus != b.omega_plus)) continue;
                const double v = soc_inf(i - 1, j - 1);
                if (std::abs(v) < 1e-14 || overridden(i, j)) continue;
                SocModel s;
                s.i = i;
                s.j = j;
                s.shape = SocModel::Shape::constant;
                s.asymptotic_value = v;
                socs.push_back(s);
            }
        }
    }
    for (const auto& sp : spec.socs) {
        SocModel s;
        s.i = sp.i;
        s.j = sp.j;
        if (!sp.table_path.empty() || sp.shape == "tabulated") {
            if (sp.table_path.empty())
                throw ConfigError("soc " + std::to_string(sp.i) + "_" + std::to_string(sp.j) +
                                  ": tabulated shape needs table=path");
            s = load_tabulated_soc(sp.table_path, sp.i, sp.j);
        } else if (sp.shape == "constant") {
            s.shape = SocModel::Shape::constant;
            s.asymptotic_value = hartree_from_cm1(sp.value_cm1);
        } else if (sp.shape == "tanh-switch") {
            s.shape = SocModel::Shape::tanh_switch;
            s.asymptotic_value = hartree_from_cm1(sp.value_cm1);
            s.amplitude = hartree_from_cm1(sp.amplitude_cm1);
            s.center = sp.center;
            s.width = sp.width;
        } else {
            throw ConfigError("unknown SOC shape: " + sp.shape);
        }
        socs.push_back(s);
    }
    // Optional diabatized exchanges.
    for (const auto& sp : spec.socs) {
        if (sp.swap_with_i == 0 && sp.swap_with_j == 0) continue;
        SocModel* a = nullptr;
        SocModel* b = nullptr;
        for (auto& s : socs) {
            if (s.i == std::min(sp.i, sp.j) && s.j == std::max(sp.i, sp.j)) a = &s;
            if (s.i == std::min(sp.swap_with_i, sp.swap_with_j) &&
                s.j == std::max(sp.swap_with_i, sp.swap_with_j))
                b = &s;
        }
        if (!a || !b)
            throw ConfigError("swap_with names a SOC pair that is not defined");
        auto [sa, sb] = diabatize_swap(*a, *b, sp.swap_radius, sp.swap_width);
        sa.i = a->i, sa.j = a->j;
        sb.i = b->i, sb.j = b->j;
        *a = sa;
        *b = sb;
    }

    X1Coupling x1{spec.x1_w_au, spec.x1_rc, spec.x1_delta};
    return {spec.mu, spec.c4, th, std::move(curves), names, std::move(socs), x1};
}

PotentialSurfaceSet PotentialSurfaceSet::default_model()
{
    return build(default_surface_spec());
}

namespace {

// Reorder the columns of the current eigen-decomposition to follow the
// previous one (largest-overlap assignment), so adiabats stay continuous.
void track_order(const Eigen::MatrixXd& prev_vecs, Eigen::VectorXd& vals, Eigen::MatrixXd& vecs)
{
    const int n = static_cast<int>(vals.size());
    const Eigen::MatrixXd overlap = (prev_vecs.transpose() * vecs).cwiseAbs();
    std::vector<int> assign(static_cast<std::size_t>(n), -1);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    // Greedy on descending overlap magnitude.
    std::vector<std::tuple<double, int, int>> entries;
    entries.reserve(static_cast<std::size_t>(n * n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) entries.emplace_back(overlap(r, c), r, c);
    std::sort(entries.begin(), entries.end(), [](auto& a, auto& b) { return std::get<0>(a) > std::get<0>(b); });
    int placed = 0;
    for (const auto& [w, r, c] : entries) {
        (void)w;
        if (assign[static_cast<std::size_t>(r)] >= 0 || used[static_cast<std::size_t>(c)]) continue;
        assign[static_cast<std::size_t>(r)] = c;
        used[static_cast<std::size_t>(c)] = true;
        if (++placed == n) break;
    }
    Eigen::VectorXd v2(n);
    Eigen::MatrixXd m2(vecs.rows(), n);
    for (int r = 0; r < n; ++r) {
        v2(r) = vals(assign[static_cast<std::size_t>(r)]);
        m2.col(r) = vecs.col(assign[static_cast<std::size_t>(r)]);
    }
    vals = v2;
    vecs = m2;
}

} // namespace

AdiabatSet adiabats_case_c(const PotentialSurfaceSet& s, const std::vector<double>& grid)
{
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw ConfigError("R grid must be strictly increasing");

    static const std::vector<std::pair<const char*, std::vector<int>>> blocks = {
        {"0+", {1, 2, 3, 4}}, {"0-", {5, 6, 7}}, {"1", {8, 9, 10, 11, 12}},
        {"2", {13, 14, 15}}, {"3", {16}},
    };
    AdiabatSet out;
    out.grid = grid;
    std::size_t total = 0;
    for (const auto& b : blocks) total += b.second.size();
    out.curves.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(grid.size()));

    Eigen::MatrixXd block;
    std::size_t row0 = 0;
    for (const auto& [label, kets] : blocks) {
        const int n = static_cast<int>(kets.size());
        Eigen::MatrixXd prev_vecs;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            s.case_a_block_into(kets, grid[g], block);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
            Eigen::VectorXd vals = es.eigenvalues();
            Eigen::MatrixXd vecs = es.eigenvectors();
            if (g > 0) track_order(prev_vecs, vals, vecs);
            prev_vecs = vecs;
            for (int k = 0; k < n; ++k)
                out.curves(static_cast<Eigen::Index>(row0) + k, static_cast<Eigen::Index>(g)) = vals(k);
        }
        for (int k = 0; k < n; ++k)
            out.labels.push_back(std::string(label) + "#" + std::to_string(k + 1));
        row0 += static_cast<std::size_t>(n);
    }
    return out;
}

Eigen::MatrixXd case_e_matrix(const PotentialSurfaceSet& s, const FrameTransform& ft, double r,
                              bool include_centrifugal)
{
    Eigen::MatrixXd va;
    s.case_a_block_into(ft.cols, r, va);
    Eigen::MatrixXd w = ft.matrix * va * ft.matrix.transpose();
    if (include_centrifugal) {
        const double f = 1.0 / (2.0 * s.reduced_mass() * r * r);
        for (int i = 0; i < w.rows(); ++i) {
            const double l = ft.rows[static_cast<std::size_t>(i)].ell;
            w(i, i) += f * l * (l + 1.0);
        }
    }
    return w;
}

AdiabatSet adiabats_case_e(const PotentialSurfaceSet& s, int J, int parity,
                           const std::vector<double>& grid)
{
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw ConfigError("R grid must be strictly increasing");
    const FrameTransform ft = frame_transform(J, parity, s.thresholds());
    const int n = static_cast<int>(ft.rows.size());
    AdiabatSet out;
    out.grid = grid;
    out.curves.resize(n, static_cast<Eigen::Index>(grid.size()));
    Eigen::MatrixXd prev_vecs;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const Eigen::MatrixXd w = case_e_matrix(s, ft, grid[g], true);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w);
        Eigen::VectorXd vals = es.eigenvalues();
        Eigen::MatrixXd vecs = es.eigenvectors();
        if (g > 0) track_order(prev_vecs, vals, vecs);
        prev_vecs = vecs;
        for (int k = 0; k < n; ++k) out.curves(k, static_cast<Eigen::Index>(g)) = vals(k);
    }
    for (int k = 0; k < n; ++k) out.labels.push_back("e#" + std::to_string(k + 1));
    return out;
}

} // namespace atomion
