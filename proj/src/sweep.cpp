#include "tripod/sweep.hpp"

#include "tripod/analytic.hpp"
#include "tripod/config.hpp"
#include "tripod/errors.hpp"
#include "tripod/output.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace tripod {

std::string_view sweep_parameter_name(SweepParameter p)
{
    switch (p) {
    case SweepParameter::delta:
        return "delta";
    case SweepParameter::b_field:
        return "b_field";
    case SweepParameter::control3_lead:
        return "control3_lead";
    }
    return "?";
}

SweepParameter parse_sweep_parameter(std::string_view name)
{
    for (SweepParameter p :
         {SweepParameter::delta, SweepParameter::b_field, SweepParameter::control3_lead})
        if (sweep_parameter_name(p) == name)
            return p;
    throw ConfigError("unknown sweep parameter '" + std::string(name) +
                      "' (expected delta, b_field or control3_lead)");
}

void SweepSpec::validate() const
{
    if (values.empty())
        throw ConfigError("sweep needs at least one value");
    for (double v : values)
        if (!std::isfinite(v))
            throw ConfigError("sweep values must be finite");
    if (parameter != SweepParameter::control3_lead && !base_scenario.magnetic)
        throw ConfigError("a " + std::string(sweep_parameter_name(parameter)) +
                          " sweep needs a magnetic stage in the scenario");
    if (parameter == SweepParameter::control3_lead &&
        (!base_scenario.control2.release || !base_scenario.control3.release))
        throw ConfigError("a control3_lead sweep needs release windows on both controls");
}

Scenario sweep_point(const Scenario& base, SweepParameter parameter, double value)
{
    Scenario s = base;
    switch (parameter) {
    case SweepParameter::delta:
        s.magnetic->b_field = b_field_for_area(s, value);
        break;
    case SweepParameter::b_field:
        s.magnetic->b_field = convert_units(s.units, value, Unit::tesla, Unit::au_magnetic);
        break;
    case SweepParameter::control3_lead: {
        const double lead = convert_units(s.units, value, Unit::microseconds, Unit::inverse_gamma);
        PulseShape& c2 = *s.control2.release;
        const double length = c2.t_end - c2.t_start;
        c2.t_start = s.control3.release->t_start + lead;
        c2.t_end = c2.t_start + length;
        break;
    }
    }
    return s;
}

namespace {

struct RunResult
{
    double released_peak = 0.0;
    double z_peak = 0.0;
    double delta = std::numeric_limits<double>::quiet_NaN();
};

RunResult run_point(const Scenario& s, const std::optional<std::filesystem::path>& dir)
{
    Scenario quiet = s;
    if (!dir)
        quiet.outputs = OutputRequest{};
    const SimulationRecord rec = run_simulation(quiet);
    if (dir)
        write_outputs(rec, *dir);
    RunResult r;
    r.released_peak = rec.metrics.released_peak;
    r.z_peak = rec.metrics.z_peak;
    if (s.magnetic)
        r.delta = magnetic_phase_area(s).delta_bc;
    return r;
}

double release_branch(const Scenario& s)
{
    auto value = [](const ControlField& c) {
        return c.release ? c.release->amplitude : 0.0;
    };
    return std::atan2(value(s.control3), value(s.control2));
}

} // namespace

SweepSummary run_sweep(const SweepSpec& spec, unsigned threads)
{
    spec.validate();
    const Scenario& base = spec.base_scenario;

    // Jobs: the sweep values, then the zero reference, then the delta = pi
    // reference for the magnetic sweeps.
    std::vector<Scenario> jobs;
    std::vector<std::optional<std::filesystem::path>> dirs;
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        jobs.push_back(sweep_point(base, spec.parameter, spec.values[i]));
        if (spec.outputs_dir)
            dirs.emplace_back(*spec.outputs_dir / ("run_" + std::to_string(i)));
        else
            dirs.emplace_back();
    }
    const bool magnetic = spec.parameter != SweepParameter::control3_lead;
    jobs.push_back(sweep_point(base, spec.parameter, 0.0));
    dirs.emplace_back();
    if (magnetic) {
        Scenario pi_run = base;
        pi_run.magnetic->b_field = b_field_for_area(base, constants::pi);
        jobs.push_back(pi_run);
        dirs.emplace_back();
    }

    std::vector<RunResult> results(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size())
                return;
            try {
                results[i] = run_point(jobs[i], dirs[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    const unsigned n_threads =
        std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    SweepSummary summary;
    summary.parameter = spec.parameter;
    const std::size_t n = spec.values.size();
    summary.reference_released_peak = results[n].released_peak;
    if (magnetic) {
        summary.reference_z_peak = results[n + 1].z_peak;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            summary.reference_z_peak = std::max(summary.reference_z_peak, results[i].z_peak);
    }
    const double phi = release_branch(base);
    for (std::size_t i = 0; i < n; ++i) {
        SweepRow row;
        row.value = spec.values[i];
        row.released_peak = results[i].released_peak;
        row.z_peak = results[i].z_peak;
        row.released_peak_ratio = summary.reference_released_peak > 0
                                      ? row.released_peak / summary.reference_released_peak
                                      : 0.0;
        row.z_peak_ratio = summary.reference_z_peak > 0 ? row.z_peak / summary.reference_z_peak : 0.0;
        row.predicted_ratio = magnetic ? released_height_factor(phi, results[i].delta)
                                       : std::numeric_limits<double>::quiet_NaN();
        row.deviation = std::abs(row.released_peak_ratio - row.predicted_ratio);
        summary.rows.push_back(row);
    }
    return summary;
}

std::string summary_csv(const SweepSummary& summary)
{
    std::string out(sweep_parameter_name(summary.parameter));
    out += ",released_peak,released_peak_ratio,z_peak,z_peak_ratio,predicted_ratio,deviation\n";
    for (const SweepRow& r : summary.rows) {
        const double cells[] = {r.value,        r.released_peak,   r.released_peak_ratio,
                                r.z_peak,       r.z_peak_ratio,    r.predicted_ratio,
                                r.deviation};
        for (std::size_t i = 0; i < std::size(cells); ++i) {
            if (i)
                out += ',';
            out += std::isnan(cells[i]) ? std::string("nan") : format_number(cells[i]);
        }
        out += '\n';
    }
    return out;
}

unsigned sweep_threads_from_env()
{
    if (const char* env = std::getenv("TRIPODSIM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace tripod
