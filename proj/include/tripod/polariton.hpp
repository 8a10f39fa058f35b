#pragma once

#include "tripod/model.hpp"

#include <optional>

namespace tripod {

// Below this control norm (Gamma) the branch angle phi is undefined and held.
inline constexpr double dark_control_threshold = 1e-6;

struct PolaritonFrame
{
    double theta = constants::pi / 2; // tan(theta) = kappa / Omega
    double phi = constants::pi / 4;   // tan(phi) = |Omega_3| / |Omega_2|
    double chi2 = 0.0;
    double chi3 = 0.0;
    double chi = 0.0;
    double omega_norm = 0.0;
    bool held = false; // phi, chi2, chi3 carried over from an earlier frame
};

// With Omega below dark_control_threshold the angles and control phases are
// taken from `previous` (or the defaults when there is none).
PolaritonFrame mixing_frame(cplx omega2, cplx omega3, double kappa, double chi_accumulated,
                            const std::optional<PolaritonFrame>& previous = std::nullopt);

// d(chi)/dt = sin^2(theta) (cos^2(phi) chi2' + sin^2(phi) chi3')
double chi_rate(const PolaritonFrame& frame, double chi2_dot, double chi3_dot);

cplx dark_polariton(cplx omega1, cplx coh_bc, cplx coh_bd, const PolaritonFrame& frame,
                    double kappa);

cplx z_polariton(cplx coh_bc, cplx coh_bd, const PolaritonFrame& frame);

// Follows the control fields in time: holds phi through dark intervals and
// accumulates chi with the trapezoid rule.
class FrameTracker
{
public:
    explicit FrameTracker(double kappa) : kappa_(kappa) {}

    const PolaritonFrame& update(double tau, cplx omega2, cplx omega3);
    const std::optional<PolaritonFrame>& current() const { return frame_; }

private:
    double kappa_;
    std::optional<PolaritonFrame> frame_;
    double tau_ = 0.0;
    double chi_dot_ = 0.0;
    bool have_rate_ = false;
    double chi2_unwrapped_ = 0.0;
    double chi3_unwrapped_ = 0.0;
};

} // namespace tripod
