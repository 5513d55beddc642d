#pragma once

#include <string_view>

#include "atomion/errors.hpp"

namespace atomion::units {

// All internal computation is in Hartree atomic units (hbar = m_e = e = 1).
// Temperatures are treated as energies k_B*T at the interface; no temperature
// type exists internally.

inline constexpr double cm1_per_hartree   = 219474.6313632;
inline constexpr double kelvin_per_hartree = 3.1577502e5;
inline constexpr double bohr_in_cm        = 5.29177210903e-9;
inline constexpr double au_time_in_s      = 2.4188843265e-17;
// a0^3 / t_au, the atomic unit of a two-body rate coefficient.
inline constexpr double au_rate_in_cm3_per_s =
    bohr_in_cm * bohr_in_cm * bohr_in_cm / au_time_in_s;

inline constexpr double hartree_from_cm1(double x) { return x / cm1_per_hartree; }
inline constexpr double cm1_from_hartree(double x) { return x * cm1_per_hartree; }
inline constexpr double hartree_from_kelvin(double x) { return x / kelvin_per_hartree; }
inline constexpr double kelvin_from_hartree(double x) { return x * kelvin_per_hartree; }

enum class Unit {
    hartree,
    wavenumber,   // cm^-1
    kelvin,       // k_B T as energy
    microkelvin,
    bohr,
    centimeter,
    nanometer,
    au_rate,      // a0^3 / t_au
    cm3_per_s,
};

enum class Dimension { energy, length, rate };

Dimension dimension_of(Unit u);

// Multiplicative factor taking one unit of `u` to atomic units of its class.
double to_au_factor(Unit u);

// Exact multiplicative conversion. Throws DimensionError when the two unit
// tags do not belong to the same dimension class.
double convert(double value, Unit from, Unit to);

Unit parse_unit(std::string_view name);

} // namespace atomion::units
