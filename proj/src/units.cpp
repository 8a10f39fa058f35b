#include "tripod/units.hpp"

#include "tripod/errors.hpp"

#include <array>
#include <string>

namespace tripod {

namespace {

enum class Dimension { frequency, time, magnetic, length };

struct UnitInfo
{
    Unit unit;
    std::string_view name;
    Dimension dim;
};

constexpr std::array<UnitInfo, 10> unit_table{{
    {Unit::au_frequency, "au_frequency", Dimension::frequency},
    {Unit::rad_per_s, "rad/s", Dimension::frequency},
    {Unit::mhz, "MHz", Dimension::frequency},
    {Unit::gamma, "Gamma", Dimension::frequency},
    {Unit::microseconds, "us", Dimension::time},
    {Unit::inverse_gamma, "1/Gamma", Dimension::time},
    {Unit::tesla, "T", Dimension::magnetic},
    {Unit::au_magnetic, "au_magnetic", Dimension::magnetic},
    {Unit::centimeters, "cm", Dimension::length},
    {Unit::sample_length, "L", Dimension::length},
}};

const UnitInfo& info(Unit u)
{
    for (const auto& entry : unit_table)
        if (entry.unit == u)
            return entry;
    throw UnitError("unknown unit");
}

// Factor taking a value in `u` to the canonical SI-like unit of its
// dimension: rad/s, s, T, cm.
double to_canonical(const UnitContext& ctx, Unit u)
{
    switch (u) {
    case Unit::au_frequency: return 1.0 / constants::au_time_s;
    case Unit::rad_per_s: return 1.0;
    case Unit::mhz: return 2.0 * constants::pi * 1e6;
    case Unit::gamma: return ctx.gamma_si;
    case Unit::microseconds: return 1e-6;
    case Unit::inverse_gamma: return 1.0 / ctx.gamma_si;
    case Unit::tesla: return 1.0;
    case Unit::au_magnetic: return constants::au_magnetic_tesla;
    case Unit::centimeters: return 1.0;
    case Unit::sample_length: return ctx.sample_length_cm;
    }
    throw UnitError("unknown unit");
}

} // namespace

std::string_view unit_name(Unit u)
{
    return info(u).name;
}

Unit parse_unit(std::string_view name)
{
    for (const auto& entry : unit_table)
        if (entry.name == name)
            return entry.unit;
    throw UnitError("unsupported unit '" + std::string(name) + "'");
}

UnitContext UnitContext::from_gamma_mhz(double gamma_mhz, double sample_length_cm)
{
    UnitContext ctx;
    ctx.gamma_si = gamma_mhz * 1e6 * 2.0 * constants::pi;
    ctx.sample_length_cm = sample_length_cm;
    return ctx;
}

double UnitContext::gamma_mhz() const
{
    return gamma_si / (2.0 * constants::pi * 1e6);
}

double UnitContext::light_crossing_rate() const
{
    return constants::speed_of_light_cm_s / (sample_length_cm * gamma_si);
}

double convert_units(const UnitContext& ctx, double value, Unit from, Unit to)
{
    if (from == to)
        return value;
    if (info(from).dim != info(to).dim)
        throw UnitError("cannot convert " + std::string(unit_name(from)) + " to " +
                        std::string(unit_name(to)));
    return value * (to_canonical(ctx, from) / to_canonical(ctx, to));
}

} // namespace tripod
