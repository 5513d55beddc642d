#include "atomion/landau_zener.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "atomion/errors.hpp"
#include "atomion/units.hpp"

namespace atomion {

double lz_probability(const LZCrossing& c, double e_coll, double mu)
{
    if (!(e_coll > c.u_c))
        throw ForbiddenCrossingError("lz_probability: crossing classically forbidden at this energy");
    if (c.df <= 0) throw ConfigError("lz_probability: slope difference must be positive");
    const double v = std::sqrt(2.0 * (e_coll - c.u_c) / mu);
    return std::exp(-2.0 * M_PI * c.w_c * c.w_c / (v * c.df));
}

double double_path(double p)
{
    if (p < 0 || p > 1) throw ConfigError("double_path: probability outside [0,1]");
    return 2.0 * p * (1.0 - p);
}

LZCrossing x1_reference_crossing(double mu)
{
    LZCrossing c;
    c.r_c = 11.06;
    c.w_c = 0.001795;
    c.u_c = -units::hartree_from_cm1(3450.0); // crossing sits below the S+D entrance
    const double p_ref = 0.769;
    const double v0 = std::sqrt(2.0 * (0.0 - c.u_c) / mu);
    c.df = 2.0 * M_PI * c.w_c * c.w_c / (v0 * (-std::log(p_ref)));
    return c;
}

FclzProbabilities fclz_network(double p_t, double p_b, Entrance ent, FclzVariant variant)
{
    if (p_t < 0 || p_t > 1 || p_b < 0 || p_b > 1)
        throw ConfigError("fclz_network: probabilities outside [0,1]");
    FclzProbabilities out;
    if (ent == Entrance::D52) {
        out.entrance_weight = 1.0 / 12.0;
        const double through_t = p_t * (1.0 - p_t); // double passage of the upper crossing
        if (variant == FclzVariant::value_consistent) {
            out.nrce = through_t * p_b / 6.0;
            out.fsq = through_t * (1.0 - p_b) / 6.0;
        } else {
            out.nrce = through_t * (1.0 - p_b) / 6.0;
            out.fsq = through_t * p_b / 6.0;
        }
    } else {
        out.entrance_weight = 1.0 / 8.0;
        out.nrce = (1.0 - p_b) * p_b / 4.0;
        out.fsq = 0.0;
    }
    out.elastic_remainder = out.entrance_weight - out.nrce - out.fsq;
    return out;
}

FclzFromPotentials fclz_from_potentials(const PotentialSurfaceSet& s, Entrance ent,
                                        double window_lo, double window_hi)
{
    static const std::vector<int> kets = {1, 2, 3, 4};
    const double dr = 0.002;
    std::vector<double> grid;
    for (double r = window_lo; r <= window_hi + 0.5 * dr; r += dr) grid.push_back(r);

    // Tracked adiabats of the 0+ block across the window.
    const int n = 4;
    Eigen::MatrixXd curves(n, static_cast<Eigen::Index>(grid.size()));
    Eigen::MatrixXd block, prev;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        s.case_a_block_into(kets, grid[g], block);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
        curves.col(static_cast<Eigen::Index>(g)) = es.eigenvalues();
    }

    FclzFromPotentials out;
    out.adiabats.grid = grid;
    out.adiabats.curves = curves;
    for (int k = 0; k < n; ++k) out.adiabats.labels.push_back("0+#" + std::to_string(k + 1));

    const double entrance_threshold =
        ent == Entrance::D32 ? s.thresholds().sd32 : s.thresholds().sd52;

    // Local minima of adjacent-level gaps mark the avoided crossings.
    struct Hit {
        double r, gap, energy;
        int pair;
    };
    std::vector<Hit> hits;
    for (int pair = 0; pair + 1 < n; ++pair) {
        for (std::size_t g = 1; g + 1 < grid.size(); ++g) {
            const double gm = curves(pair + 1, static_cast<Eigen::Index>(g - 1)) - curves(pair, static_cast<Eigen::Index>(g - 1));
            const double g0 = curves(pair + 1, static_cast<Eigen::Index>(g)) - curves(pair, static_cast<Eigen::Index>(g));
            const double gp = curves(pair + 1, static_cast<Eigen::Index>(g + 1)) - curves(pair, static_cast<Eigen::Index>(g + 1));
            if (g0 < gm && g0 <= gp) {
                const double emid = 0.5 * (curves(pair + 1, static_cast<Eigen::Index>(g)) + curves(pair, static_cast<Eigen::Index>(g)));
                hits.push_back({grid[g], g0, emid, pair});
            }
        }
    }
    if (hits.empty())
        throw TopologyError("fclz_from_potentials: no avoided crossing in the search window");

    // Keep at most one hit per adjacent pair (the narrowest), then the two
    // narrowest overall; ordering by crossing energy labels B (lower) and T
    // (upper).
    std::vector<Hit> per_pair;
    for (int pair = 0; pair + 1 < n; ++pair) {
        const Hit* best = nullptr;
        for (const auto& h : hits)
            if (h.pair == pair && (!best || h.gap < best->gap)) best = &h;
        if (best) per_pair.push_back(*best);
    }
    std::sort(per_pair.begin(), per_pair.end(), [](const Hit& a, const Hit& b) { return a.gap < b.gap; });
    if (per_pair.size() > 2) per_pair.resize(2);
    std::sort(per_pair.begin(), per_pair.end(),
              [](const Hit& a, const Hit& b) { return a.energy < b.energy; });

    const double h_slope = 0.5;
    for (const auto& hit : per_pair) {
        LZCrossing c;
        c.r_c = hit.r;
        c.w_c = 0.5 * hit.gap;
        // Upper adiabat of the pair follows one diabat on each side; its
        // slopes at r_c +- 0.5 approximate the two diabatic slopes.
        auto upper_at = [&](double r) {
            s.case_a_block_into(kets, r, block);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
            return es.eigenvalues()(hit.pair + 1);
        };
        const double d = 0.05;
        const double s_out = (upper_at(hit.r + h_slope + d) - upper_at(hit.r + h_slope - d)) / (2 * d);
        const double s_in = (upper_at(hit.r - h_slope + d) - upper_at(hit.r - h_slope - d)) / (2 * d);
        c.df = std::abs(s_out - s_in);
        c.u_c = hit.energy - entrance_threshold;
        out.crossings.push_back(c);
    }
    for (const auto& c : out.crossings)
        out.probabilities.push_back(lz_probability(c, 0.0, s.reduced_mass()));
    out.p_b = out.probabilities.front();
    out.p_t = out.probabilities.back();
    return out;
}

} // namespace atomion
