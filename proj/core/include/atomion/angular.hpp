#pragma once

#include "atomion/half_int.hpp"

namespace atomion {

// Exact angular-momentum algebra for integer and half-integer arguments.
// Values are evaluated from the Racah closed forms with exact rational
// arithmetic (converted to double only at the end), so orthogonality
// relations hold to near machine precision for arguments well beyond the
// j <= 20 range needed here. Non-triangular or otherwise invalid quantum
// numbers yield 0 by convention, which keeps summation loops branch-free.

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M);

double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3);

double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6);

double wigner9j(HalfInt j1, HalfInt j2, HalfInt j3,
                HalfInt j4, HalfInt j5, HalfInt j6,
                HalfInt j7, HalfInt j8, HalfInt j9);

} // namespace atomion
