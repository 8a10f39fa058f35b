#include "tripod/output.hpp"

#include "tripod/config.hpp"
#include "tripod/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace tripod {

using ordered_json = nlohmann::ordered_json;

std::string boundary_csv(const SimulationRecord& rec)
{
    std::string out = "tau_invGamma,re_omega1,im_omega1,abs_omega1\n";
    out.reserve(out.size() + rec.tau.size() * 80);
    for (std::size_t i = 0; i < rec.tau.size(); ++i) {
        const cplx v = rec.boundary_series[i];
        out += format_number(rec.tau[i]);
        out += ',';
        out += format_number(v.real());
        out += ',';
        out += format_number(v.imag());
        out += ',';
        out += format_number(std::abs(v));
        out += '\n';
    }
    return out;
}

namespace {

template <class F>
ordered_json column(const Frame& f, F&& get)
{
    ordered_json a = ordered_json::array();
    for (const SigmaState& s : f.sigma)
        a.push_back(get(s));
    return a;
}

ordered_json complex_part(std::span<const cplx> values, bool imaginary)
{
    ordered_json a = ordered_json::array();
    for (cplx v : values)
        a.push_back(imaginary ? v.imag() : v.real());
    return a;
}

ordered_json frame_json(const Frame& f, const std::vector<double>& xi)
{
    ordered_json j;
    j["tau"] = f.tau;
    j["xi"] = xi;
    j["re_omega1"] = complex_part(f.omega1, false);
    j["im_omega1"] = complex_part(f.omega1, true);
    j["pop_a"] = column(f, [](const SigmaState& s) { return s.pop_a; });
    j["pop_b"] = column(f, [](const SigmaState& s) { return s.pop_b; });
    j["pop_c"] = column(f, [](const SigmaState& s) { return s.pop_c; });
    j["pop_d"] = column(f, [](const SigmaState& s) { return s.pop_d; });
    const std::pair<const char*, cplx SigmaState::*> cohs[] = {
        {"ab", &SigmaState::coh_ab}, {"ac", &SigmaState::coh_ac}, {"ad", &SigmaState::coh_ad},
        {"bc", &SigmaState::coh_bc}, {"bd", &SigmaState::coh_bd}, {"cd", &SigmaState::coh_cd},
    };
    for (const auto& [name, member] : cohs) {
        j[std::string("re_") + name] = column(f, [&](const SigmaState& s) { return (s.*member).real(); });
        j[std::string("im_") + name] = column(f, [&](const SigmaState& s) { return (s.*member).imag(); });
    }
    j["re_psi"] = complex_part(f.psi, false);
    j["im_psi"] = complex_part(f.psi, true);
    j["re_z"] = complex_part(f.z, false);
    j["im_z"] = complex_part(f.z, true);
    const PolaritonFrame& p = f.polariton;
    j["theta"] = p.theta;
    j["phi"] = p.phi;
    j["chi"] = p.chi;
    j["chi2"] = p.chi2;
    j["chi3"] = p.chi3;
    j["omega_norm"] = p.omega_norm;
    j["phi_held"] = p.held;
    return j;
}

} // namespace

std::string snapshots_ndjson(const SimulationRecord& rec)
{
    std::string out;
    for (const Frame& f : rec.snapshots) {
        out += frame_json(f, rec.grid.xi).dump();
        out += '\n';
    }
    return out;
}

std::string metrics_json(const SimulationRecord& rec)
{
    const Metrics& m = rec.metrics;
    ordered_json j;
    ordered_json metrics;
    metrics["stored_peak"] = m.stored_peak;
    metrics["stored_fraction"] = m.stored_fraction;
    metrics["released_peak"] = m.released_peak;
    metrics["release_time"] = m.release_time;
    metrics["group_delay"] = m.group_delay;
    metrics["transmitted_fraction"] = m.transmitted_fraction;
    metrics["z_peak"] = m.z_peak;
    metrics["clipped"] = m.clipped;
    j["metrics"] = metrics;

    ordered_json diag;
    diag["max_trace_drift"] = rec.diagnostics.max_trace_drift;
    diag["min_population"] = rec.diagnostics.min_population;
    diag["max_purity"] = rec.diagnostics.max_purity;
    j["diagnostics"] = diag;
    j["warnings"] = rec.warnings;

    ordered_json grid;
    grid["n_xi"] = rec.grid.xi.size();
    grid["d_tau"] = rec.grid.d_tau;
    grid["n_tau"] = rec.grid.n_tau;
    grid["snapshots"] = rec.snapshots.size();
    j["grid"] = grid;

    ordered_json derived;
    derived["kappa"] = rec.scenario.system.kappa;
    if (rec.scenario.magnetic) {
        const MagneticPhase area = magnetic_phase_area(rec.scenario);
        derived["delta_bc"] = area.delta_bc;
        derived["delta_bd"] = area.delta_bd;
    }
    j["derived"] = derived;

    ordered_json scenario;
    for (const auto& [key, value] : config_entries(rec.scenario))
        scenario[key] = value;
    j["scenario"] = scenario;
    return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw Error("write to '" + path.string() + "' failed");
}

void write_outputs(const SimulationRecord& rec, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error("cannot create '" + dir.string() + "': " + ec.message());
    write_text_file(dir / "boundary.csv", boundary_csv(rec));
    write_text_file(dir / "snapshots.ndjson", snapshots_ndjson(rec));
    write_text_file(dir / "metrics.json", metrics_json(rec));
}

} // namespace tripod
