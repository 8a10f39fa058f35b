#pragma once

#include "tripod/propagator.hpp"

namespace tripod {

// Both sides of the polariton evolution equations in the co-moving frame,
//   dPsi/dtau + (Omega^2/alpha) dPsi/dxi = phi' Omega Z / cos(theta)
//   dZ/dtau = -cos(theta) phi' Psi / Omega
// evaluated with centred differences on the snapshots. The coupled residual
// keeps the right-hand sides, the decoupled one drops them.
struct DecouplingResidual
{
    double coupled_psi = 0.0;
    double coupled_z = 0.0;
    double decoupled_psi = 0.0;
    double decoupled_z = 0.0;
    std::size_t frames_used = 0;
};

// Frames with Omega below this (Gamma) are skipped: phi' is undefined there.
inline constexpr double decoupling_control_threshold = 1e-3;

// Residuals are the worst absolute mismatch times the window length, divided
// by max|Psi| (Psi equation) or max|Psi|/kappa (Z equation) over the window.
// Throws AnalysisError when fewer than three snapshots fall in the window.
DecouplingResidual decoupling_residual(const SimulationRecord& record, double tau_begin,
                                       double tau_end);

} // namespace tripod
