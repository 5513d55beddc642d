#include "atomion/units.hpp"

#include <string>

namespace atomion::units {

Dimension dimension_of(Unit u)
{
    switch (u) {
    case Unit::hartree:
    case Unit::wavenumber:
    case Unit::kelvin:
    case Unit::microkelvin:
        return Dimension::energy;
    case Unit::bohr:
    case Unit::centimeter:
    case Unit::nanometer:
        return Dimension::length;
    case Unit::au_rate:
    case Unit::cm3_per_s:
        return Dimension::rate;
    }
    throw DimensionError("unknown unit tag");
}

double to_au_factor(Unit u)
{
    switch (u) {
    case Unit::hartree:     return 1.0;
    case Unit::wavenumber:  return 1.0 / cm1_per_hartree;
    case Unit::kelvin:      return 1.0 / kelvin_per_hartree;
    case Unit::microkelvin: return 1e-6 / kelvin_per_hartree;
    case Unit::bohr:        return 1.0;
    case Unit::centimeter:  return 1.0 / bohr_in_cm;
    case Unit::nanometer:   return 1e-7 / bohr_in_cm;
    case Unit::au_rate:     return 1.0;
    case Unit::cm3_per_s:   return 1.0 / au_rate_in_cm3_per_s;
    }
    throw DimensionError("unknown unit tag");
}

double convert(double value, Unit from, Unit to)
{
    if (dimension_of(from) != dimension_of(to))
        throw DimensionError("incompatible dimension classes in unit conversion");
    return value * (to_au_factor(from) / to_au_factor(to));
}

Unit parse_unit(std::string_view name)
{
    const std::string s(name);
    if (s == "hartree" || s == "Eh" || s == "au") return Unit::hartree;
    if (s == "cm-1" || s == "cm^-1" || s == "wavenumber") return Unit::wavenumber;
    if (s == "K" || s == "kelvin") return Unit::kelvin;
    if (s == "uK" || s == "microkelvin") return Unit::microkelvin;
    if (s == "bohr" || s == "a0") return Unit::bohr;
    if (s == "cm") return Unit::centimeter;
    if (s == "nm") return Unit::nanometer;
    if (s == "au_rate") return Unit::au_rate;
    if (s == "cm3/s" || s == "cm3s") return Unit::cm3_per_s;
    throw DimensionError("unknown unit name: " + s);
}

} // namespace atomion::units
