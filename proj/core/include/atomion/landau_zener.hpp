#pragma once

#include <vector>

#include "atomion/observables.hpp"
#include "atomion/potentials.hpp"

namespace atomion {

// Linearized avoided crossing: half-gap w_c, slope difference df of the two
// diabatic branches, and crossing energy u_c relative to the entrance
// threshold.
struct LZCrossing {
    double r_c = 0; // a0
    double w_c = 0; // Eh
    double df = 0;  // Eh / a0
    double u_c = 0; // Eh

    bool classically_allowed(double e_coll) const { return e_coll > u_c; }
};

// Single-path probability exp(-2 pi w^2 / (v df)), v = sqrt(2 (E - u_c)/mu).
double lz_probability(const LZCrossing& c, double e_coll, double mu);

// Probability of ending on the other diabat after traversing the crossing
// inbound and outbound.
double double_path(double p);

// Reference linearization of the outer singlet crossing: gap and location
// fixed by the gaussian coupling, slope difference solved by inverting the
// published single-path probability 0.769 at zero collision energy.
LZCrossing x1_reference_crossing(double mu = 10481.62);

// Four-channel network combinations. The two printed expressions for the
// d5/2 entrance disagree with the printed numbers (they appear swapped);
// both variants are provided and tests anchor on the numbers.
enum class FclzVariant { printed, value_consistent };

struct FclzProbabilities {
    double nrce = 0;
    double fsq = 0;
    double elastic_remainder = 0;
    double entrance_weight = 0;
};

FclzProbabilities fclz_network(double p_t, double p_b, Entrance ent,
                               FclzVariant variant = FclzVariant::value_consistent);

// Scan the adiabats of the omega = 0+ block for avoided crossings inside
// [window_lo, window_hi], linearize each, and evaluate single-path
// probabilities at zero collision energy for the given entrance.
struct FclzFromPotentials {
    std::vector<LZCrossing> crossings;     // sorted by crossing energy, ascending
    std::vector<double> probabilities;     // single path at E = 0, same order
    double p_b = 0;                        // lowest-energy crossing
    double p_t = 0;                        // highest-energy crossing (== p_b if only one)
    AdiabatSet adiabats;                   // window diagnostics
};

FclzFromPotentials fclz_from_potentials(const PotentialSurfaceSet& s, Entrance ent,
                                        double window_lo = 8.0, double window_hi = 14.0);

} // namespace atomion
