#pragma once

#include <string_view>

namespace tripod {

namespace constants {
// CODATA 2018
inline constexpr double au_time_s = 2.4188843265857e-17;
inline constexpr double au_magnetic_tesla = 2.35051756758e5;
inline constexpr double speed_of_light_cm_s = 2.99792458e10;
inline constexpr double pi = 3.14159265358979323846;
} // namespace constants

enum class Unit {
    au_frequency,  // atomic units of angular frequency (= energy, hbar = 1)
    rad_per_s,
    mhz,           // omega / 2pi
    gamma,         // internal frequency unit
    microseconds,
    inverse_gamma, // internal time unit
    tesla,
    au_magnetic,
    centimeters,
    sample_length, // internal length unit, L = 1
};

std::string_view unit_name(Unit u);
Unit parse_unit(std::string_view name);

// Conversions between laboratory units and the internal system where
// Gamma = 1 sets frequencies, 1/Gamma times and the sample length L = 1.
struct UnitContext
{
    double gamma_si = 4e-10 / constants::au_time_s; // rad/s
    double sample_length_cm = 1.0;

    static UnitContext from_gamma_mhz(double gamma_mhz, double sample_length_cm = 1.0);

    double gamma_au() const { return gamma_si * constants::au_time_s; }
    double gamma_mhz() const;
    // c / (L Gamma): the only place the speed of light enters.
    double light_crossing_rate() const;

    bool operator==(const UnitContext&) const = default;
};

double convert_units(const UnitContext& ctx, double value, Unit from, Unit to);

} // namespace tripod
