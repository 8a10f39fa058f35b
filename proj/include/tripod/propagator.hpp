#pragma once

#include "tripod/bloch.hpp"
#include "tripod/model.hpp"
#include "tripod/polariton.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tripod {

// Co-moving frame grid: xi = z / L on [0, 1], tau = t - z/c.
struct Grid
{
    std::vector<double> xi;
    double d_tau = 0.0;
    long n_tau = 0;

    static Grid from_spec(const GridSpec& spec);
    double spacing() const { return xi.size() > 1 ? xi[1] - xi[0] : 0.0; }
};

// One full-grid sample of the fields at time tau.
struct Frame
{
    double tau = 0.0;
    std::vector<cplx> omega1;
    std::vector<SigmaState> sigma;
    std::vector<cplx> psi;
    std::vector<cplx> z;
    PolaritonFrame polariton;
};

struct Metrics
{
    double stored_peak = 0.0;     // field height the stored coherence would release
    double stored_fraction = 0.0; // stored excitation / incident pulse energy
    double released_peak = 0.0;   // max |Omega_1(L)| after the kicked time
    double release_time = 0.0;    // tau of that maximum
    double group_delay = 0.0;     // exit peak time minus input peak time
    double transmitted_fraction = 0.0;
    double z_peak = 0.0;          // max |Z| in the final frame
    bool clipped = false;         // exit pulse still running at t_final
};

struct Diagnostics
{
    double max_trace_drift = 0.0;
    double min_population = 0.0;
    double max_purity = 0.0;
};

struct SimulationRecord
{
    Scenario scenario;
    Grid grid;
    std::vector<double> tau;             // n_tau + 1 samples
    std::vector<cplx> input_series;      // Omega_1(0, tau)
    std::vector<cplx> boundary_series;   // Omega_1(L, tau)
    std::vector<Frame> snapshots;
    std::optional<Frame> stored_frame;   // sigma^0, before the magnetic stage
    std::optional<Frame> kicked_frame;   // after the magnetic stage
    Frame final_frame;
    Metrics metrics;
    Diagnostics diagnostics;
    std::vector<std::string> warnings;
};

// Integrates dOmega_1/dxi = -i alpha sigma_ba from xi = 0 with the trapezoid rule.
std::vector<cplx> field_slice(std::span<const cplx> sigma_ba, cplx boundary, double alpha);
void field_slice(std::span<const cplx> sigma_ba, cplx boundary, double alpha,
                 std::span<cplx> out);

SimulationRecord run_simulation(const Scenario& scenario);

// Metrics from the stored series and frames of a record.
Metrics compute_metrics(const SimulationRecord& record);

// Builds a frame (including Psi and Z) from the field and atomic state.
Frame make_frame(double tau, std::span<const cplx> omega1, std::span<const SigmaState> sigma,
                 const PolaritonFrame& polariton, double kappa);

// Reruns with n_xi and 1/d_tau multiplied by `factor` and returns the relative
// change of released_peak.
double convergence_probe(const Scenario& scenario, int factor);

// Tau of the sample maximum, refined by a parabola through its neighbours.
double refined_peak_time(std::span<const double> tau, std::span<const double> values);

} // namespace tripod
