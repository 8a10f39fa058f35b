#include "tripod/analytic.hpp"

#include "tripod/errors.hpp"
#include "tripod/polariton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tripod {

CoherenceSplit split_coherences(cplx sigma_bc0, cplx sigma_bd0, double phi, double delta,
                                double delta_bd, double tolerance)
{
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double scale = std::abs(sigma_bc0) + std::abs(sigma_bd0);
    if (std::abs(c * sigma_bd0 - s * sigma_bc0) > tolerance * scale)
        throw AnalysisError("split_coherences: stored coherences are not aligned with the "
                            "release branch (sigma_bd != tan(phi) sigma_bc)");

    const cplx bc = std::polar(1.0, delta) * sigma_bc0;
    const cplx bd = std::polar(1.0, delta_bd) * sigma_bd0;
    // Projection onto (cos phi, sin phi) and its orthogonal complement.
    const cplx along = c * bc + s * bd;
    CoherenceSplit out;
    out.sigma_bc_prime = c * along;
    out.sigma_bd_prime = s * along;
    out.sigma_bc_dprime = bc - out.sigma_bc_prime;
    out.sigma_bd_dprime = bd - out.sigma_bd_prime;
    return out;
}

double released_height_factor(double phi, double delta)
{
    const double s2 = std::sin(2.0 * phi);
    const double sh = std::sin(0.5 * delta);
    return std::sqrt(std::max(0.0, 1.0 - s2 * s2 * sh * sh));
}

double released_phase(double phi, double delta)
{
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return std::arg(c * c * std::polar(1.0, delta) + s * s);
}

cplx trapped_z_amplitude(cplx sigma_bc0, double phi, double delta)
{
    return std::sin(phi) * (std::polar(1.0, delta) - 1.0) * sigma_bc0;
}

ThetaHistory theta_history(const Scenario& s, double tau_begin, double tau_end, double d_tau)
{
    if (!(d_tau > 0) || !(tau_end >= tau_begin))
        throw std::invalid_argument("theta_history: need d_tau > 0 and tau_end >= tau_begin");
    ThetaHistory h;
    const long n = std::lround((tau_end - tau_begin) / d_tau);
    h.tau.reserve(n + 1);
    h.theta.reserve(n + 1);
    for (long i = 0; i <= n; ++i) {
        const double t = tau_begin + i * d_tau;
        const double omega = std::hypot(std::abs(s.control2(t)), std::abs(s.control3(t)));
        h.tau.push_back(t);
        h.theta.push_back(std::atan2(s.system.kappa, omega));
    }
    return h;
}

double ReleasePrediction::peak() const
{
    double p = 0.0;
    for (cplx v : omega1)
        p = std::max(p, std::abs(v));
    return p;
}

namespace {

cplx interpolate(std::span<const double> xi, std::span<const cplx> f, double x)
{
    if (x < xi.front() || x > xi.back())
        return {};
    const auto it = std::upper_bound(xi.begin(), xi.end(), x);
    if (it == xi.end())
        return f.back();
    const std::size_t j = static_cast<std::size_t>(it - xi.begin());
    const double w = (x - xi[j - 1]) / (xi[j] - xi[j - 1]);
    return (1.0 - w) * f[j - 1] + w * f[j];
}

} // namespace

ReleasePrediction released_pulse_prediction(std::span<const double> xi,
                                            std::span<const cplx> psi_profile,
                                            const ThetaHistory& history, double kappa,
                                            double alpha)
{
    if (xi.size() != psi_profile.size() || xi.size() < 2)
        throw AnalysisError("released_pulse_prediction: profile and grid sizes differ");
    if (history.tau.size() != history.theta.size() || history.tau.empty())
        throw AnalysisError("released_pulse_prediction: empty or inconsistent theta history");

    ReleasePrediction p;
    const std::size_t n = history.tau.size();
    p.tau = history.tau;
    p.omega1.resize(n);
    p.shift.resize(n);

    auto speed = [&](double theta) {
        const double t = std::tan(theta);
        if (!std::isfinite(t) || t == 0.0)
            return t == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        return kappa * kappa / (alpha * t * t);
    };
    double x = 0.0;
    double v_prev = speed(history.theta[0]);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const double v = speed(history.theta[i]);
            x += 0.5 * (history.tau[i] - history.tau[i - 1]) * (v_prev + v);
            v_prev = v;
        }
        p.shift[i] = x;
        p.omega1[i] = std::cos(history.theta[i]) * interpolate(xi, psi_profile, 1.0 - x);
    }

    double peak = 0.0;
    for (cplx v : psi_profile)
        peak = std::max(peak, std::abs(v));
    for (std::size_t k = 0; k < xi.size(); ++k) {
        if (std::abs(psi_profile[k]) > 1e-3 * peak) {
            p.incomplete = xi[k] + x < 1.0;
            break;
        }
    }
    if (p.incomplete)
        p.warnings.emplace_back("profile has not left the medium by the end of the history");
    return p;
}

ReleasePrediction released_pulse_prediction(const SimulationRecord& rec)
{
    const Scenario& s = rec.scenario;
    const std::optional<Frame>& start = rec.kicked_frame ? rec.kicked_frame : rec.stored_frame;
    if (!start)
        throw AnalysisError("released_pulse_prediction: record has no stored or kicked frame");

    auto release_value = [](const ControlField& c) {
        return c.release ? std::polar(c.release->amplitude, c.release->phase) : cplx{};
    };
    const double kappa = s.system.kappa;
    const PolaritonFrame branch =
        mixing_frame(release_value(s.control2), release_value(s.control3), kappa, 0.0);
    PolaritonFrame frame = start->polariton;
    frame.phi = branch.phi;
    frame.chi2 = branch.chi2;
    frame.chi3 = branch.chi3;

    std::vector<cplx> psi(start->sigma.size());
    for (std::size_t k = 0; k < psi.size(); ++k)
        psi[k] = dark_polariton(start->omega1[k], start->sigma[k].coh_bc,
                                start->sigma[k].coh_bd, frame, kappa);
    const ThetaHistory h = theta_history(s, start->tau, s.grid.t_final, rec.grid.d_tau);
    return released_pulse_prediction(rec.grid.xi, psi, h, kappa, s.coupling_alpha);
}

AdiabaticResidual adiabatic_check(const SimulationRecord& rec, double threshold,
                                  std::optional<double> tau_begin, std::optional<double> tau_end)
{
    const Scenario& s = rec.scenario;
    const auto& snaps = rec.snapshots;
    auto qualifies = [&](const Frame& f) {
        if (tau_begin && f.tau < *tau_begin)
            return false;
        if (tau_end && f.tau > *tau_end)
            return false;
        return std::abs(s.control2(f.tau)) > threshold && std::abs(s.control3(f.tau)) > threshold;
    };

    AdiabaticResidual r;
    double omega1_scale = 0.0;
    double omega1_worst = 0.0;
    double rate_scale = 0.0;
    double rate_worst = 0.0;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const Frame& f = snaps[i];
        if (!qualifies(f))
            continue;
        ++r.frames_used;
        const cplx o2 = s.control2(f.tau);
        const cplx o3 = s.control3(f.tau);
        for (std::size_t k = 0; k < f.sigma.size(); ++k) {
            omega1_scale = std::max(omega1_scale, std::abs(f.omega1[k]));
            omega1_worst = std::max(
                omega1_worst,
                std::abs(f.omega1[k] + o2 * f.sigma[k].coh_bc + o3 * f.sigma[k].coh_bd));
        }
        if (i == 0 || i + 1 >= snaps.size())
            continue;
        const Frame& before = snaps[i - 1];
        const Frame& after = snaps[i + 1];
        const double span = after.tau - before.tau;
        for (std::size_t k = 0; k < f.sigma.size(); ++k) {
            const cplx dbc = (after.sigma[k].coh_bc - before.sigma[k].coh_bc) / span;
            const cplx dbd = (after.sigma[k].coh_bd - before.sigma[k].coh_bd) / span;
            const cplx lhs = std::conj(o3) * dbc;
            const cplx rhs = std::conj(o2) * dbd;
            rate_scale = std::max(rate_scale, std::abs(lhs) + std::abs(rhs));
            rate_worst = std::max(rate_worst, std::abs(lhs - rhs));
        }
    }
    if (r.frames_used == 0)
        throw AnalysisError("adiabatic_check: no snapshot with both controls above threshold");
    r.omega1_residual = omega1_scale > 0 ? omega1_worst / omega1_scale : 0.0;
    r.rate_match_residual = rate_scale > 0 ? rate_worst / rate_scale : 0.0;
    return r;
}

} // namespace tripod
