#include "tripod/model.hpp"

#include "tripod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tripod {

namespace {

// Optical envelopes must stay below this while the magnetic field is on.
constexpr double dark_threshold = 1e-6;

std::string str(std::string_view s) { return std::string(s); }

} // namespace

std::array<LevelZeeman, 4> rubidium87_levels()
{
    return {{
        {2.0, 0.0, 0.5},  // a
        {2.0, -1.0, 0.5}, // b
        {2.0, 1.0, 0.5},  // c
        {1.0, 1.0, -0.5}, // d
    }};
}

void LevelZeeman::validate(std::string_view name) const
{
    if (std::abs(m_quantum) > f_quantum)
        throw ScenarioError(str(name) + ": |M| must not exceed F");
}

void AtomicSystem::validate() const
{
    if (!(gamma_ab >= 0))
        throw ScenarioError("gamma_ab must be non-negative");
    if (!(gamma_ac >= 0))
        throw ScenarioError("gamma_ac must be non-negative");
    if (!(gamma_ad >= 0))
        throw ScenarioError("gamma_ad must be non-negative");
    if (!(kappa > 0))
        throw ScenarioError("kappa must be positive");
    static constexpr std::array<std::string_view, 4> names{"zeeman.a", "zeeman.b", "zeeman.c",
                                                           "zeeman.d"};
    for (int i = 0; i < 4; ++i)
        zeeman[i].validate(names[i]);
}

std::string_view pulse_kind_name(PulseKind kind)
{
    switch (kind) {
    case PulseKind::sine_square: return "sine-square";
    case PulseKind::tanh_switch: return "tanh-switch";
    case PulseKind::rectangular: return "rectangular";
    case PulseKind::zero: return "zero";
    }
    return "zero";
}

PulseKind parse_pulse_kind(std::string_view name)
{
    for (auto k : {PulseKind::sine_square, PulseKind::tanh_switch, PulseKind::rectangular,
                   PulseKind::zero})
        if (pulse_kind_name(k) == name)
            return k;
    throw ScenarioError("unknown pulse kind '" + str(name) + "'");
}

void PulseShape::validate(std::string_view name) const
{
    if (!(t_end > t_start))
        throw ScenarioError(str(name) + ": t_end must exceed t_start");
    if (!(amplitude >= 0))
        throw ScenarioError(str(name) + ": amplitude must be non-negative");
    if (kind == PulseKind::tanh_switch && !(rise > 0))
        throw ScenarioError(str(name) + ": rise must be positive for tanh-switch");
    if (!std::isfinite(phase))
        throw ScenarioError(str(name) + ": phase must be finite");
}

cplx evaluate_pulse(const PulseShape& shape, double t)
{
    double envelope = 0.0;
    switch (shape.kind) {
    case PulseKind::sine_square:
        if (t >= shape.t_start && t <= shape.t_end) {
            const double s = std::sin(constants::pi * (t - shape.t_start) /
                                      (shape.t_end - shape.t_start));
            envelope = shape.amplitude * s * s;
        }
        break;
    case PulseKind::tanh_switch:
        envelope = shape.amplitude * 0.5 *
                   (std::tanh((t - shape.t_start) / shape.rise) -
                    std::tanh((t - shape.t_end) / shape.rise));
        break;
    case PulseKind::rectangular:
        if (t >= shape.t_start && t < shape.t_end)
            envelope = shape.amplitude;
        break;
    case PulseKind::zero:
        break;
    }
    if (shape.phase == 0.0)
        return {envelope, 0.0};
    return std::polar(envelope, shape.phase);
}

cplx evaluate_pulse_rate(const PulseShape& shape, double t)
{
    double rate = 0.0;
    switch (shape.kind) {
    case PulseKind::sine_square:
        if (t >= shape.t_start && t <= shape.t_end) {
            const double w = constants::pi / (shape.t_end - shape.t_start);
            rate = shape.amplitude * w * std::sin(2.0 * w * (t - shape.t_start));
        }
        break;
    case PulseKind::tanh_switch: {
        const double on = 1.0 / std::cosh((t - shape.t_start) / shape.rise);
        const double off = 1.0 / std::cosh((t - shape.t_end) / shape.rise);
        rate = shape.amplitude * 0.5 * (on * on - off * off) / shape.rise;
        break;
    }
    case PulseKind::rectangular:
    case PulseKind::zero:
        break;
    }
    if (shape.phase == 0.0)
        return {rate, 0.0};
    return std::polar(rate, shape.phase);
}

cplx ControlField::operator()(double t) const
{
    cplx value = evaluate_pulse(write, t);
    if (release)
        value += evaluate_pulse(*release, t);
    return value;
}

long GridSpec::n_tau() const
{
    return std::lround(t_final / d_tau);
}

void Scenario::validate() const
{
    system.validate();
    signal.validate("signal");
    control2.write.validate("control2");
    control3.write.validate("control3");
    if (control2.release)
        control2.release->validate("control2.release");
    if (control3.release)
        control3.release->validate("control3.release");
    if (!(coupling_alpha > 0))
        throw ScenarioError("alpha must be positive");
    if (grid.n_xi < 2)
        throw ScenarioError("grid.n_xi must be at least 2");
    if (!(grid.d_tau > 0))
        throw ScenarioError("grid.d_tau must be positive");
    if (!(grid.t_final > grid.d_tau))
        throw ScenarioError("grid.t_final must exceed grid.d_tau");
    if (!(units.gamma_si > 0) || !(units.sample_length_cm > 0))
        throw ScenarioError("gamma_mhz and sample_length_cm must be positive");
    if (outputs.snapshot_interval < 0)
        throw ScenarioError("output.snapshot_interval must be non-negative");

    if (magnetic) {
        if (!(magnetic->duration > 0))
            throw ScenarioError("magnetic.duration_us must be positive");
        if (!std::isfinite(magnetic->b_field))
            throw ScenarioError("magnetic.b_tesla must be finite");
        // The Zeeman stage is only defined with every optical field off.
        constexpr int samples = 2000;
        for (int i = 0; i <= samples; ++i) {
            const double t = magnetic->t_start + magnetic->duration * i / samples;
            const double largest = std::max({std::abs(evaluate_pulse(signal, t)),
                                             std::abs(control2(t)), std::abs(control3(t))});
            if (largest >= dark_threshold)
                throw ScenarioError("magnetic stage overlaps optical fields at tau = " +
                                    std::to_string(t) + "/Gamma");
        }
    }
}

void sync_kappa(Scenario& scenario)
{
    scenario.system.kappa =
        std::sqrt(scenario.coupling_alpha * scenario.units.light_crossing_rate());
}

namespace {

double window_end(const PulseShape& p)
{
    return p.kind == PulseKind::zero ? -std::numeric_limits<double>::infinity() : p.t_end;
}

} // namespace

StorageTimeline storage_timeline(const Scenario& scenario)
{
    StorageTimeline tl;
    const auto& c2 = scenario.control2;
    const auto& c3 = scenario.control3;
    tl.has_release = c2.release.has_value() || c3.release.has_value();
    if (!tl.has_release) {
        tl.write_end = std::max(window_end(c2.write), window_end(c3.write));
        tl.release_start = tl.stored_time = tl.kicked_time = scenario.grid.t_final;
        return tl;
    }
    tl.write_end = std::max(window_end(c2.write), window_end(c3.write));
    tl.release_start = std::numeric_limits<double>::infinity();
    if (c2.release)
        tl.release_start = std::min(tl.release_start, c2.release->t_start);
    if (c3.release)
        tl.release_start = std::min(tl.release_start, c3.release->t_start);
    if (scenario.magnetic) {
        tl.stored_time = scenario.magnetic->t_start;
        tl.kicked_time = scenario.magnetic->t_end();
    } else {
        tl.stored_time = tl.kicked_time = 0.5 * (tl.write_end + tl.release_start);
    }
    return tl;
}

double zeeman_shift(const LevelZeeman& level, double b_field_au)
{
    return level.g_factor * b_field_au * level.m_quantum / 2.0;
}

MagneticPhase magnetic_phase_area(const Scenario& scenario)
{
    if (!scenario.magnetic)
        throw ScenarioError("no magnetic stage");
    const auto& sys = scenario.system;
    const double b = scenario.magnetic->b_field;
    const double e_b = zeeman_shift(sys.level(Level::b), b);
    const double e_c = zeeman_shift(sys.level(Level::c), b);
    const double e_d = zeeman_shift(sys.level(Level::d), b);
    // Shifts are in a.u. of energy; duration goes to a.u. of time.
    const double duration_au =
        convert_units(scenario.units, scenario.magnetic->duration, Unit::inverse_gamma,
                      Unit::microseconds) *
        1e-6 / constants::au_time_s;
    // + 0.0 turns a signed zero at B = 0 into +0
    return {(e_b - e_c) * duration_au + 0.0, (e_b - e_d) * duration_au + 0.0};
}

double b_field_for_area(const Scenario& scenario, double delta)
{
    if (!scenario.magnetic)
        throw ScenarioError("no magnetic stage");
    Scenario unit_b = scenario;
    unit_b.magnetic->b_field = 1.0;
    const double per_unit_b = magnetic_phase_area(unit_b).delta_bc;
    if (per_unit_b == 0.0)
        throw ScenarioError("levels b and c have equal Zeeman shifts; no area is reachable");
    return delta / per_unit_b;
}

DetuningShift magnetic_detuning_shift(const Scenario& scenario)
{
    if (!scenario.magnetic)
        return {};
    const auto& sys = scenario.system;
    const double b = scenario.magnetic->b_field;
    const double gamma_au = scenario.units.gamma_au();
    const double e_a = zeeman_shift(sys.level(Level::a), b);
    return {(zeeman_shift(sys.level(Level::b), b) - e_a) / gamma_au,
            (zeeman_shift(sys.level(Level::c), b) - e_a) / gamma_au,
            (zeeman_shift(sys.level(Level::d), b) - e_a) / gamma_au};
}

double signal_duration_default()
{
    return convert_units(UnitContext{}, 2.4, Unit::microseconds, Unit::inverse_gamma);
}

namespace {

PulseShape tanh_window(double amplitude, double t_on, double t_off, double rise)
{
    return {PulseKind::tanh_switch, amplitude, t_on, t_off, rise, 0.0};
}

Scenario base_scenario()
{
    Scenario s;
    s.system.zeeman = rubidium87_levels();
    s.signal = {PulseKind::sine_square, 0.025, 0.0, signal_duration_default(), 1.0, 0.0};
    s.coupling_alpha = 4000.0;
    s.grid = {300, 0.01, 300.0};
    s.outputs.snapshot_interval = 5.0;
    sync_kappa(s);
    return s;
}

} // namespace

Scenario storage_scenario()
{
    Scenario s = base_scenario();
    const UnitContext& u = s.units;
    s.control2.write = tanh_window(5.0, -100.0, 55.0, 3.0);
    s.control2.release = tanh_window(5.0, 165.0, 1e4, 3.0);
    s.control3 = s.control2;
    s.magnetic = MagneticStage{0.0, convert_units(u, 5.5, Unit::microseconds, Unit::inverse_gamma),
                               convert_units(u, 2.4, Unit::microseconds, Unit::inverse_gamma)};
    return s;
}

Scenario transparency_scenario()
{
    Scenario s = base_scenario();
    s.control2.write = tanh_window(5.0, -100.0, 1e4, 3.0);
    s.control3 = s.control2;
    s.grid.t_final = 200.0;
    return s;
}

Scenario delayed_release_scenario()
{
    Scenario s = base_scenario();
    const double lead = convert_units(s.units, 3.6, Unit::microseconds, Unit::inverse_gamma);
    s.control2.write = tanh_window(5.0, -100.0, 55.0, 3.0);
    s.control3.write = s.control2.write;
    s.control3.release = tanh_window(5.0, 120.0, 1e4, 3.0);
    s.control2.release = tanh_window(5.0, 120.0 + lead, 1e4, 3.0);
    s.grid.t_final = 340.0;
    return s;
}

} // namespace tripod
