#pragma once

#include "tripod/units.hpp"

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tripod {

using cplx = std::complex<double>;

enum class Level { a = 0, b = 1, c = 2, d = 3 };

struct LevelZeeman
{
    double f_quantum = 0.0;
    double m_quantum = 0.0;
    double g_factor = 0.0;

    void validate(std::string_view name) const;
    bool operator==(const LevelZeeman&) const = default;
};

// 87Rb assignment: a = (2,0), b = (2,-1), c = (2,1), d = (1,1).
std::array<LevelZeeman, 4> rubidium87_levels();

// Decay rates, detunings and coupling in units of Gamma.
struct AtomicSystem
{
    double gamma_ab = 1.0;
    double gamma_ac = 1.0;
    double gamma_ad = 1.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double delta3 = 0.0;
    double kappa = 1.0;          // sqrt(N |d_ab|^2 omega_1 / (2 eps0 hbar)), Gamma units
    double density_note = 2e12;  // cm^-3, metadata only
    std::array<LevelZeeman, 4> zeeman = rubidium87_levels();

    double gamma_total() const { return gamma_ab + gamma_ac + gamma_ad; }
    const LevelZeeman& level(Level l) const { return zeeman[static_cast<int>(l)]; }
    void validate() const;
    bool operator==(const AtomicSystem&) const = default;
};

enum class PulseKind { sine_square, tanh_switch, rectangular, zero };

std::string_view pulse_kind_name(PulseKind kind);
PulseKind parse_pulse_kind(std::string_view name);

struct PulseShape
{
    PulseKind kind = PulseKind::zero;
    double amplitude = 0.0; // Gamma
    double t_start = 0.0;   // 1/Gamma
    double t_end = 1.0;     // 1/Gamma
    double rise = 1.0;      // 1/Gamma, tanh-switch only
    double phase = 0.0;     // rad

    void validate(std::string_view name) const;
    bool operator==(const PulseShape&) const = default;
};

cplx evaluate_pulse(const PulseShape& shape, double t);

// d/dt of evaluate_pulse; zero for rectangular pulses (edges are jumps).
cplx evaluate_pulse_rate(const PulseShape& shape, double t);

// A control field is a writing window optionally followed by a release window;
// the two envelopes add.
struct ControlField
{
    PulseShape write;
    std::optional<PulseShape> release;

    cplx operator()(double t) const;
    bool operator==(const ControlField&) const = default;
};

struct MagneticStage
{
    double b_field = 0.0;  // atomic units
    double t_start = 0.0;  // 1/Gamma
    double duration = 0.0; // 1/Gamma

    double t_end() const { return t_start + duration; }
    bool operator==(const MagneticStage&) const = default;
};

struct GridSpec
{
    int n_xi = 300;
    double d_tau = 0.01;
    double t_final = 300.0;

    long n_tau() const;
    bool operator==(const GridSpec&) const = default;
};

struct OutputRequest
{
    double snapshot_interval = 0.0; // 0 disables periodic snapshots
    double snapshot_start = 0.0;
    double snapshot_end = -1.0;     // < 0 means t_final
    std::vector<double> snapshot_times;

    bool operator==(const OutputRequest&) const = default;
};

struct Scenario
{
    AtomicSystem system;
    UnitContext units;
    PulseShape signal;
    ControlField control2;
    ControlField control3;
    std::optional<MagneticStage> magnetic;
    double coupling_alpha = 4000.0; // kappa^2 L / (c Gamma)
    GridSpec grid;
    OutputRequest outputs;

    void validate() const;
    bool operator==(const Scenario&) const = default;
};

// Sets system.kappa from coupling_alpha, the unit context and the sample length.
void sync_kappa(Scenario& scenario);

// Characteristic times of a write / store / release run.
struct StorageTimeline
{
    bool has_release = false;
    double write_end = 0.0;
    double release_start = 0.0;
    double stored_time = 0.0; // coherences taken as sigma^0 here
    double kicked_time = 0.0; // after the magnetic stage
};

StorageTimeline storage_timeline(const Scenario& scenario);

// Energy shift g_F B M / 2 (atomic units, hbar = 1).
double zeeman_shift(const LevelZeeman& level, double b_field_au);

struct MagneticPhase
{
    double delta_bc = 0.0; // -(dE_c - dE_b) * duration
    double delta_bd = 0.0; // -(dE_d - dE_b) * duration
};

MagneticPhase magnetic_phase_area(const Scenario& scenario);

// Magnetic induction (a.u.) that gives sigma_bc the area `delta` over the
// scenario's magnetic window.
double b_field_for_area(const Scenario& scenario, double delta);

// Level shifts relative to the upper state, in Gamma units; added to the
// detunings Delta_1..3 while the magnetic stage is active.
struct DetuningShift
{
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
};

DetuningShift magnetic_detuning_shift(const Scenario& scenario);

// Write, store with a magnetic window (B = 0), and release with equal 5 Gamma controls.
Scenario storage_scenario();
// Controls held on throughout; pulse propagates in the transparency window.
Scenario transparency_scenario();
// Equal controls at writing; at release control 3 leads control 2 by 3.6 us.
Scenario delayed_release_scenario();

// 2.4 us in 1/Gamma for the default unit context.
double signal_duration_default();

} // namespace tripod
