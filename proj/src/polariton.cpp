#include "tripod/polariton.hpp"

#include <cmath>

namespace tripod {

PolaritonFrame mixing_frame(cplx omega2, cplx omega3, double kappa, double chi_accumulated,
                            const std::optional<PolaritonFrame>& previous)
{
    PolaritonFrame f;
    const double a2 = std::abs(omega2);
    const double a3 = std::abs(omega3);
    f.omega_norm = std::hypot(a2, a3);
    f.theta = std::atan2(kappa, f.omega_norm);
    f.chi = chi_accumulated;
    if (f.omega_norm < dark_control_threshold) {
        f.held = true;
        if (previous) {
            f.phi = previous->phi;
            f.chi2 = previous->chi2;
            f.chi3 = previous->chi3;
        }
        return f;
    }
    f.phi = std::atan2(a3, a2);
    f.chi2 = a2 > 0 ? std::arg(omega2) : (previous ? previous->chi2 : 0.0);
    f.chi3 = a3 > 0 ? std::arg(omega3) : (previous ? previous->chi3 : 0.0);
    return f;
}

double chi_rate(const PolaritonFrame& frame, double chi2_dot, double chi3_dot)
{
    const double st = std::sin(frame.theta);
    const double cp = std::cos(frame.phi);
    const double sp = std::sin(frame.phi);
    return st * st * (cp * cp * chi2_dot + sp * sp * chi3_dot);
}

cplx dark_polariton(cplx omega1, cplx coh_bc, cplx coh_bd, const PolaritonFrame& f,
                    double kappa)
{
    const cplx atomic = std::cos(f.phi) * std::polar(1.0, f.chi2) * coh_bc +
                        std::sin(f.phi) * std::polar(1.0, f.chi3) * coh_bd;
    return std::polar(1.0, -f.chi) *
           (std::cos(f.theta) * omega1 - kappa * std::sin(f.theta) * atomic);
}

cplx z_polariton(cplx coh_bc, cplx coh_bd, const PolaritonFrame& f)
{
    return std::sin(f.phi) * std::polar(1.0, -f.chi3) * coh_bc -
           std::cos(f.phi) * std::polar(1.0, -f.chi2) * coh_bd;
}

namespace {

double unwrap(double previous_unwrapped, double wrapped)
{
    const double two_pi = 2.0 * constants::pi;
    double delta = std::remainder(wrapped - previous_unwrapped, two_pi);
    return previous_unwrapped + delta;
}

} // namespace

const PolaritonFrame& FrameTracker::update(double tau, cplx omega2, cplx omega3)
{
    if (!frame_) {
        frame_ = mixing_frame(omega2, omega3, kappa_, 0.0);
        tau_ = tau;
        chi2_unwrapped_ = frame_->chi2;
        chi3_unwrapped_ = frame_->chi3;
        chi_dot_ = 0.0;
        return *frame_;
    }
    PolaritonFrame next = mixing_frame(omega2, omega3, kappa_, frame_->chi, frame_);
    const double dt = tau - tau_;
    double chi_dot = 0.0;
    if (dt > 0) {
        const double c2 = unwrap(chi2_unwrapped_, next.chi2);
        const double c3 = unwrap(chi3_unwrapped_, next.chi3);
        chi_dot = chi_rate(next, (c2 - chi2_unwrapped_) / dt, (c3 - chi3_unwrapped_) / dt);
        // the first interval has no earlier rate; use the end value for both
        const double start_rate = have_rate_ ? chi_dot_ : chi_dot;
        next.chi = frame_->chi + 0.5 * dt * (start_rate + chi_dot);
        have_rate_ = true;
        chi2_unwrapped_ = c2;
        chi3_unwrapped_ = c3;
    }
    chi_dot_ = chi_dot;
    tau_ = tau;
    frame_ = next;
    return *frame_;
}

} // namespace tripod
