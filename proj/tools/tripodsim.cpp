// tripodsim: light storage and magnetic phase manipulation in a tripod medium.

#include "tripod/analytic.hpp"
#include "tripod/config.hpp"
#include "tripod/errors.hpp"
#include "tripod/output.hpp"
#include "tripod/plot.hpp"
#include "tripod/propagator.hpp"
#include "tripod/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace tripod;

namespace {

std::vector<double> parse_values(const std::string& text)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
            throw ConfigError("--values: cannot read '" + item + "' as a number");
        out.push_back(v);
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

void print_warnings(const SimulationRecord& rec)
{
    for (const auto& w : rec.warnings)
        std::fprintf(stderr, "tripodsim: warning: %s\n", w.c_str());
}

int cmd_run(const std::string& config, const fs::path& out, bool quiet)
{
    const Scenario s = load_config(config);
    const SimulationRecord rec = run_simulation(s);
    write_outputs(rec, out);
    print_warnings(rec);
    if (!quiet) {
        const Metrics& m = rec.metrics;
        std::printf("stored_peak          %.6g\n", m.stored_peak);
        std::printf("stored_fraction      %.6g\n", m.stored_fraction);
        std::printf("released_peak        %.6g\n", m.released_peak);
        std::printf("release_time         %.6g\n", m.release_time);
        std::printf("group_delay          %.6g\n", m.group_delay);
        std::printf("transmitted_fraction %.6g\n", m.transmitted_fraction);
        std::printf("z_peak               %.6g\n", m.z_peak);
        std::printf("outputs written to %s\n", out.string().c_str());
    }
    return 0;
}

int cmd_sweep(const std::string& config, const std::string& param, const std::string& values,
              const fs::path& out, bool quiet)
{
    SweepSpec spec;
    spec.parameter = parse_sweep_parameter(param);
    spec.values = parse_values(values);
    spec.base_scenario = load_config(config);
    spec.outputs_dir = out;
    const SweepSummary summary = run_sweep(spec, sweep_threads_from_env());
    fs::create_directories(out);
    const std::string csv = summary_csv(summary);
    write_text_file(out / "summary.csv", csv);
    if (!quiet)
        std::cout << csv;
    return 0;
}

int cmd_check(const std::string& config, int refine, const std::optional<fs::path>& out,
              bool quiet)
{
    const Scenario s = load_config(config);
    const SimulationRecord rec = run_simulation(s);
    print_warnings(rec);
    const Diagnostics& d = rec.diagnostics;
    const double convergence = convergence_probe(s, refine);

    struct Line
    {
        std::string name;
        double value;
        double limit;
        bool ok;
    };
    std::vector<Line> lines = {
        {"trace_drift", d.max_trace_drift, 1e-6, d.max_trace_drift <= 1e-6},
        {"min_population", d.min_population, -1e-9, d.min_population >= -1e-9},
        {"max_purity", d.max_purity, 1.0 + 1e-9, d.max_purity <= 1.0 + 1e-9},
        {"convergence_x" + std::to_string(refine), convergence, 0.01, convergence <= 0.01},
    };
    try {
        const AdiabaticResidual a = adiabatic_check(rec);
        lines.push_back({"adiabatic_omega1", a.omega1_residual, 0.05, a.omega1_residual <= 0.05});
    } catch (const AnalysisError&) {
        // no snapshot with both controls on; nothing to check
    }

    bool ok = true;
    nlohmann::ordered_json report = nlohmann::ordered_json::array();
    for (const Line& l : lines) {
        ok = ok && l.ok;
        if (!quiet)
            std::printf("%-4s %-20s %.6g (limit %g)\n", l.ok ? "ok" : "FAIL", l.name.c_str(),
                        l.value, l.limit);
        report.push_back({{"check", l.name}, {"value", l.value}, {"limit", l.limit}, {"ok", l.ok}});
    }
    if (out) {
        fs::create_directories(*out);
        write_text_file(*out / "check.json", report.dump(2) + "\n");
    }
    return ok ? 0 : 1;
}

int cmd_plot(const fs::path& input, const std::optional<fs::path>& out, bool quiet)
{
    for (const auto& p : plot_outputs(input, out))
        if (!quiet)
            std::printf("wrote %s\n", p.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"tripodsim: storage, magnetic phase manipulation and release of light in a "
                 "tripod atomic medium"};
    app.require_subcommand(1);
    app.footer("Angles are in radians, times in 1/Gamma unless a key says otherwise.\n"
               "TRIPODSIM_THREADS caps the number of concurrent sweep runs.");

    std::string config;
    std::string run_out, sweep_out, check_out, plot_out;
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "Run one scenario and write its outputs");
    run->add_option("-c,--config", config, "Scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--out", run_out, "Output directory")->default_val("out");
    run->add_flag("-q,--quiet", quiet, "Only report errors and warnings");
    run->footer(config_reference());

    std::string param;
    std::string values;
    CLI::App* sweep = app.add_subcommand("sweep", "Run a scenario over a list of parameter values");
    sweep->add_option("-c,--config", config, "Base scenario file")->required()->check(CLI::ExistingFile);
    sweep->add_option("-p,--param", param, "delta [rad] | b_field [T] | control3_lead [us]")->required();
    sweep->add_option("-v,--values", values, "Comma separated values")->required();
    sweep->add_option("-o,--out", sweep_out, "Output directory")->default_val("sweep");
    sweep->add_flag("-q,--quiet", quiet, "Only report errors and warnings");

    int refine = 2;
    CLI::App* check = app.add_subcommand("check", "Convergence and invariant checks on a scenario");
    check->add_option("-c,--config", config, "Scenario file")->required()->check(CLI::ExistingFile);
    check->add_option("-r,--refine", refine, "Grid refinement factor (2 or 4)")
        ->default_val(2)
        ->check(CLI::IsMember({2, 4}));
    check->add_option("-o,--out", check_out, "Directory for check.json");
    check->add_flag("-q,--quiet", quiet, "Only report failures");

    std::string input;
    CLI::App* plot = app.add_subcommand("plot", "Render outputs to SVG line plots");
    plot->add_option("input", input, "summary.csv, boundary.csv, snapshots.ndjson, metrics.json or a run directory")
        ->required();
    plot->add_option("-o,--out", plot_out, "Directory for the SVG files (default: beside the input)");
    plot->add_flag("-q,--quiet", quiet, "Do not list written files");

    CLI11_PARSE(app, argc, argv);

    auto optional_dir = [](const std::string& dir) -> std::optional<fs::path> {
        if (dir.empty())
            return std::nullopt;
        return fs::path(dir);
    };

    try {
        if (*run)
            return cmd_run(config, run_out, quiet);
        if (*sweep)
            return cmd_sweep(config, param, values, sweep_out, quiet);
        if (*check)
            return cmd_check(config, refine, optional_dir(check_out), quiet);
        if (*plot)
            return cmd_plot(input, optional_dir(plot_out), quiet);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "tripodsim: config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "tripodsim: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
