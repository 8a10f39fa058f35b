#pragma once

#include "tripod/model.hpp"
#include "tripod/propagator.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tripod {

// Post-kick ground coherences split into the part that follows the dark
// polariton out of the medium (prime) and the trapped part (double prime).
struct CoherenceSplit
{
    cplx sigma_bc_prime{};
    cplx sigma_bd_prime{};
    cplx sigma_bc_dprime{};
    cplx sigma_bd_dprime{};
};

// Default tolerance on the storage alignment sigma_bd = tan(phi) sigma_bc,
// relative to |sigma_bc| + |sigma_bd|.
inline constexpr double storage_alignment_tolerance = 1e-6;

// Stored coherences sigma^0 acquire exp(i delta) on sigma_bc and
// exp(i delta_bd) on sigma_bd, then are projected on the release branch phi.
// Throws AnalysisError when sigma^0 is not aligned with that branch.
CoherenceSplit split_coherences(cplx sigma_bc0, cplx sigma_bd0, double phi, double delta,
                                double delta_bd = 0.0,
                                double tolerance = storage_alignment_tolerance);

// sqrt(1 - sin^2(2 phi) sin^2(delta / 2))
double released_height_factor(double phi, double delta);

// arg(cos^2 phi e^{i delta} + sin^2 phi), the release phase relative to delta = 0.
double released_phase(double phi, double delta);

// Z right after the kick, sin(phi) (e^{i delta} - 1) sigma_bc0.
cplx trapped_z_amplitude(cplx sigma_bc0, double phi, double delta);

// Mixing angle theta(tau) of a scenario on a tau grid.
struct ThetaHistory
{
    std::vector<double> tau;
    std::vector<double> theta;
};

ThetaHistory theta_history(const Scenario& scenario, double tau_begin, double tau_end,
                           double d_tau);

struct ReleasePrediction
{
    std::vector<double> tau;
    std::vector<cplx> omega1; // at xi = 1
    std::vector<double> shift; // distance travelled by the profile, units of L
    bool incomplete = false;   // part of the profile still inside at the last tau
    std::vector<std::string> warnings;

    double peak() const;
};

// Carries the profile Psi(xi) rigidly at the co-moving speed
// cot^2(theta) kappa^2 / alpha and reads Omega_1 = cos(theta) Psi at xi = 1.
// The history starts at the time the profile was sampled.
ReleasePrediction released_pulse_prediction(std::span<const double> xi,
                                            std::span<const cplx> psi_profile,
                                            const ThetaHistory& history, double kappa,
                                            double alpha);

// Prediction from a record's kicked frame (or stored frame when there is no
// magnetic stage) using the scenario's controls.
ReleasePrediction released_pulse_prediction(const SimulationRecord& record);

struct AdiabaticResidual
{
    double omega1_residual = 0.0;    // |Omega_1 + Omega_2 s_bc + Omega_3 s_bd| / max|Omega_1|
    double rate_match_residual = 0.0; // |Omega_3* s_bc' - Omega_2* s_bd'| / its scale
    std::size_t frames_used = 0;
};

// Checks the adiabatic relations on snapshots where both controls exceed
// `threshold`, optionally restricted to [tau_begin, tau_end].
AdiabaticResidual adiabatic_check(const SimulationRecord& record, double threshold = 1e-3,
                                  std::optional<double> tau_begin = std::nullopt,
                                  std::optional<double> tau_end = std::nullopt);

} // namespace tripod
