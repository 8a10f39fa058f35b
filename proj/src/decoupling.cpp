#include "tripod/decoupling.hpp"

#include "tripod/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tripod {

DecouplingResidual decoupling_residual(const SimulationRecord& rec, double tau_begin,
                                       double tau_end)
{
    const Scenario& s = rec.scenario;
    const double kappa = s.system.kappa;
    const double alpha = s.coupling_alpha;
    const auto& snaps = rec.snapshots;

    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < snaps.size(); ++i)
        if (snaps[i].tau >= tau_begin && snaps[i].tau <= tau_end)
            inside.push_back(i);
    if (inside.size() < 3)
        throw AnalysisError("decoupling_residual: fewer than three snapshots in the window");

    double psi_scale = 0.0;
    for (std::size_t i : inside)
        for (cplx v : snaps[i].psi)
            psi_scale = std::max(psi_scale, std::abs(v));

    DecouplingResidual r;
    if (psi_scale == 0.0)
        return r;
    const double length = snaps[inside.back()].tau - snaps[inside.front()].tau;
    const double h = rec.grid.spacing();

    for (std::size_t j = 1; j + 1 < inside.size(); ++j) {
        const Frame& before = snaps[inside[j - 1]];
        const Frame& f = snaps[inside[j]];
        const Frame& after = snaps[inside[j + 1]];
        const double omega = f.polariton.omega_norm;
        if (omega < decoupling_control_threshold ||
            before.polariton.omega_norm < decoupling_control_threshold ||
            after.polariton.omega_norm < decoupling_control_threshold)
            continue;
        ++r.frames_used;
        const double span = after.tau - before.tau;
        const double phi_dot = (after.polariton.phi - before.polariton.phi) / span;
        const double cos_theta = std::cos(f.polariton.theta);
        const double speed = omega * omega / alpha;
        for (std::size_t k = 1; k + 1 < f.psi.size(); ++k) {
            const cplx dpsi_dtau = (after.psi[k] - before.psi[k]) / span;
            const cplx dpsi_dxi = (f.psi[k + 1] - f.psi[k - 1]) / (2.0 * h);
            const cplx dz_dtau = (after.z[k] - before.z[k]) / span;
            const cplx lhs_psi = dpsi_dtau + speed * dpsi_dxi;
            const cplx rhs_psi = phi_dot * omega * f.z[k] / cos_theta;
            const cplx rhs_z = -cos_theta * phi_dot * f.psi[k] / omega;
            r.coupled_psi = std::max(r.coupled_psi, std::abs(lhs_psi - rhs_psi));
            r.decoupled_psi = std::max(r.decoupled_psi, std::abs(lhs_psi));
            r.coupled_z = std::max(r.coupled_z, std::abs(dz_dtau - rhs_z));
            r.decoupled_z = std::max(r.decoupled_z, std::abs(dz_dtau));
        }
    }
    const double psi_norm = length / psi_scale;
    const double z_norm = length * kappa / psi_scale;
    r.coupled_psi *= psi_norm;
    r.decoupled_psi *= psi_norm;
    r.coupled_z *= z_norm;
    r.decoupled_z *= z_norm;
    return r;
}

} // namespace tripod
