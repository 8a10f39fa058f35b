#pragma once

#include "tripod/propagator.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tripod {

enum class SweepParameter {
    delta,        // magnetic pulse area on sigma_bc [rad]
    b_field,      // magnetic induction [T]
    control3_lead // release lead of control 3 over control 2 [us]
};

std::string_view sweep_parameter_name(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view name);

struct SweepSpec
{
    SweepParameter parameter = SweepParameter::delta;
    std::vector<double> values;
    Scenario base_scenario;
    std::optional<std::filesystem::path> outputs_dir; // per-run outputs when set

    void validate() const;
};

struct SweepRow
{
    double value = 0.0;
    double released_peak = 0.0;
    double released_peak_ratio = 0.0;
    double z_peak = 0.0;
    double z_peak_ratio = 0.0;
    double predicted_ratio = 0.0; // NaN when no closed form applies
    double deviation = 0.0;       // |released_peak_ratio - predicted_ratio|
};

struct SweepSummary
{
    SweepParameter parameter = SweepParameter::delta;
    std::vector<SweepRow> rows;
    double reference_released_peak = 0.0; // released peak at zero area / zero lead
    double reference_z_peak = 0.0;        // z peak at delta = pi (or largest in the sweep)
};

// The scenario of one sweep point.
Scenario sweep_point(const Scenario& base, SweepParameter parameter, double value);

// Runs every value plus the reference runs, at most `threads` at a time.
// Results do not depend on the thread count.
SweepSummary run_sweep(const SweepSpec& spec, unsigned threads);

std::string summary_csv(const SweepSummary& summary);

// TRIPODSIM_THREADS if set and positive, otherwise the hardware concurrency.
unsigned sweep_threads_from_env();

} // namespace tripod
