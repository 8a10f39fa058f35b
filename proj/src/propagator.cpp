#include "tripod/propagator.hpp"

#include "tripod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace tripod {

Grid Grid::from_spec(const GridSpec& spec)
{
    Grid g;
    g.xi.resize(spec.n_xi);
    for (int k = 0; k < spec.n_xi; ++k)
        g.xi[k] = static_cast<double>(k) / (spec.n_xi - 1);
    g.d_tau = spec.d_tau;
    g.n_tau = spec.n_tau();
    return g;
}

void field_slice(std::span<const cplx> sigma_ba, cplx boundary, double alpha,
                 std::span<cplx> out)
{
    const std::size_t n = sigma_ba.size();
    if (n < 2 || out.size() != n)
        throw std::invalid_argument("field_slice: need matching spans of at least 2 points");
    const double h = 1.0 / static_cast<double>(n - 1);
    const cplx step{0.0, -0.5 * alpha * h};
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(sigma_ba[k].real()) || !std::isfinite(sigma_ba[k].imag()))
            throw DivergenceError("field_slice: non-finite sigma_ba at xi index " +
                                  std::to_string(k));
    }
    out[0] = boundary;
    for (std::size_t k = 1; k < n; ++k)
        out[k] = out[k - 1] + step * (sigma_ba[k - 1] + sigma_ba[k]);
}

std::vector<cplx> field_slice(std::span<const cplx> sigma_ba, cplx boundary, double alpha)
{
    std::vector<cplx> out(sigma_ba.size());
    field_slice(sigma_ba, boundary, alpha, out);
    return out;
}

Frame make_frame(double tau, std::span<const cplx> omega1, std::span<const SigmaState> sigma,
                 const PolaritonFrame& polariton, double kappa)
{
    Frame f;
    f.tau = tau;
    f.omega1.assign(omega1.begin(), omega1.end());
    f.sigma.assign(sigma.begin(), sigma.end());
    f.polariton = polariton;
    f.psi.resize(sigma.size());
    f.z.resize(sigma.size());
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        f.psi[k] = dark_polariton(omega1[k], sigma[k].coh_bc, sigma[k].coh_bd, polariton, kappa);
        f.z[k] = z_polariton(sigma[k].coh_bc, sigma[k].coh_bd, polariton);
    }
    return f;
}

namespace {

std::set<long> snapshot_steps(const Scenario& s)
{
    std::set<long> steps;
    const long n_tau = s.grid.n_tau();
    auto add = [&](double t) {
        const long step = std::lround(t / s.grid.d_tau);
        if (step >= 0 && step <= n_tau)
            steps.insert(step);
    };
    const auto& out = s.outputs;
    if (out.snapshot_interval > 0) {
        const double end = out.snapshot_end < 0 ? s.grid.t_final : out.snapshot_end;
        const long count = static_cast<long>(std::floor((end - out.snapshot_start) /
                                                        out.snapshot_interval + 1e-9));
        for (long i = 0; i <= count; ++i)
            add(out.snapshot_start + i * out.snapshot_interval);
    }
    for (double t : out.snapshot_times)
        add(t);
    return steps;
}

double trapezoid_energy(std::span<const cplx> series, double step)
{
    if (series.size() < 2)
        return 0.0;
    double sum = 0.5 * (std::norm(series.front()) + std::norm(series.back()));
    for (std::size_t i = 1; i + 1 < series.size(); ++i)
        sum += std::norm(series[i]);
    return sum * step;
}

std::vector<double> magnitudes(std::span<const cplx> values)
{
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(),
                   [](cplx v) { return std::abs(v); });
    return out;
}

} // namespace

double refined_peak_time(std::span<const double> tau, std::span<const double> values)
{
    if (values.empty())
        return std::nan("");
    const auto it = std::max_element(values.begin(), values.end());
    const std::size_t i = static_cast<std::size_t>(it - values.begin());
    if (i == 0 || i + 1 >= values.size())
        return tau[i];
    const double ym = values[i - 1], y0 = values[i], yp = values[i + 1];
    const double curvature = ym - 2.0 * y0 + yp;
    if (curvature >= 0.0)
        return tau[i];
    const double offset = 0.5 * (ym - yp) / curvature;
    return tau[i] + offset * (tau[i + 1] - tau[i]);
}

Metrics compute_metrics(const SimulationRecord& rec)
{
    Metrics m;
    const Scenario& s = rec.scenario;
    const StorageTimeline tl = storage_timeline(s);
    const double dt = rec.grid.d_tau;

    const std::vector<double> in_abs = magnitudes(rec.input_series);
    const std::vector<double> out_abs = magnitudes(rec.boundary_series);

    std::size_t first = 0;
    if (tl.has_release) {
        first = static_cast<std::size_t>(
            std::clamp<long>(std::lround(tl.kicked_time / dt), 0, static_cast<long>(rec.tau.size()) - 1));
    }
    const std::span<const double> window_tau(rec.tau.data() + first, rec.tau.size() - first);
    const std::span<const double> window_abs(out_abs.data() + first, out_abs.size() - first);
    const auto peak_it = std::max_element(window_abs.begin(), window_abs.end());
    m.released_peak = peak_it == window_abs.end() ? 0.0 : *peak_it;
    m.release_time = refined_peak_time(window_tau, window_abs);
    m.group_delay = m.release_time - refined_peak_time(rec.tau, in_abs);

    const double incident = trapezoid_energy(rec.input_series, dt);
    m.transmitted_fraction =
        incident > 0 ? trapezoid_energy(rec.boundary_series, dt) / incident : 0.0;

    if (tl.has_release && rec.stored_frame) {
        auto release_value = [](const ControlField& c) {
            return c.release ? std::polar(c.release->amplitude, c.release->phase) : cplx{};
        };
        const double kappa = s.system.kappa;
        const PolaritonFrame fr =
            mixing_frame(release_value(s.control2), release_value(s.control3), kappa, 0.0);
        const Frame& st = *rec.stored_frame;
        double peak = 0.0;
        std::vector<double> density(st.sigma.size());
        for (std::size_t k = 0; k < st.sigma.size(); ++k) {
            const cplx dark = std::cos(fr.phi) * std::polar(1.0, fr.chi2) * st.sigma[k].coh_bc +
                              std::sin(fr.phi) * std::polar(1.0, fr.chi3) * st.sigma[k].coh_bd;
            peak = std::max(peak, std::abs(dark));
            density[k] = std::norm(st.sigma[k].coh_bc) + std::norm(st.sigma[k].coh_bd);
        }
        m.stored_peak = kappa * std::cos(fr.theta) * peak;
        double stored = 0.0;
        const double h = rec.grid.spacing();
        for (std::size_t k = 0; k + 1 < density.size(); ++k)
            stored += 0.5 * h * (density[k] + density[k + 1]);
        m.stored_fraction = incident > 0 ? s.coupling_alpha * stored / incident : 0.0;
    }

    for (cplx z : rec.final_frame.z)
        m.z_peak = std::max(m.z_peak, std::abs(z));
    m.clipped = !out_abs.empty() && m.released_peak > 0 && out_abs.back() > 0.01 * m.released_peak;
    return m;
}

SimulationRecord run_simulation(const Scenario& scenario)
{
    scenario.validate();

    SimulationRecord rec;
    rec.scenario = scenario;
    rec.grid = Grid::from_spec(scenario.grid);

    const Scenario& s = rec.scenario;
    const AtomicSystem& sys = s.system;
    const double dt = rec.grid.d_tau;
    const long n_tau = rec.grid.n_tau;
    const std::size_t n = rec.grid.xi.size();
    const double alpha = s.coupling_alpha;
    const double kappa = sys.kappa;

    const DetuningShift shift = magnetic_detuning_shift(s);
    const StorageTimeline tl = storage_timeline(s);
    const long stored_step = tl.has_release ? std::lround(tl.stored_time / dt) : -1;
    const long kicked_step = tl.has_release ? std::lround(tl.kicked_time / dt) : -1;

    // Frames are filled cell by cell while marching in xi, so allocate them
    // up front together with the polariton frame of each sample time.
    std::vector<long> frame_steps;
    for (long step : snapshot_steps(s))
        frame_steps.push_back(step);
    const std::size_t n_snapshots = frame_steps.size();
    if (tl.has_release && stored_step >= 0 && stored_step <= n_tau)
        frame_steps.push_back(stored_step);
    if (tl.has_release && kicked_step >= 0 && kicked_step <= n_tau)
        frame_steps.push_back(kicked_step);
    frame_steps.push_back(n_tau);
    std::vector<Frame> frames(frame_steps.size());
    std::vector<std::vector<std::size_t>> frames_at(n_tau + 1);
    for (std::size_t f = 0; f < frame_steps.size(); ++f) {
        frames_at[frame_steps[f]].push_back(f);
        frames[f].tau = frame_steps[f] * dt;
        frames[f].omega1.resize(n);
        frames[f].sigma.resize(n);
    }

    // Control fields at the step boundaries and midpoints, and the Zeeman
    // switch. The shift is piecewise constant per step, decided at the step
    // midpoint, so the accumulated phase is exactly rate * (steps inside).
    std::vector<cplx> c2(n_tau + 1), c3(n_tau + 1), c2_mid(n_tau), c3_mid(n_tau);
    std::vector<char> magnetic_on(n_tau, 0);
    rec.tau.resize(n_tau + 1);
    FrameTracker tracker(kappa);
    for (long step = 0; step <= n_tau; ++step) {
        const double t = step * dt;
        rec.tau[step] = t;
        c2[step] = s.control2(t);
        c3[step] = s.control3(t);
        const PolaritonFrame& pf = tracker.update(t, c2[step], c3[step]);
        for (std::size_t f : frames_at[step])
            frames[f].polariton = pf;
        if (step == n_tau)
            break;
        const double mid = t + 0.5 * dt;
        c2_mid[step] = s.control2(mid);
        c3_mid[step] = s.control3(mid);
        magnetic_on[step] = s.magnetic && mid >= s.magnetic->t_start && mid < s.magnetic->t_end();
    }

    // March in xi. Cell k sees Omega_1 = drive_k(tau) - i beta sigma_ba(k, tau)
    // with drive_k = Omega_1(k-1) - i beta sigma_ba(k-1), which is the
    // trapezoid rule of field_slice. The own-cell term stays inside the RK4
    // stages; the drive is a known history from the previous cell, carried
    // together with its tau derivative so the midpoint value comes from a
    // cubic Hermite interpolant over the step.
    const double h = rec.grid.spacing();
    const cplx minus_i_beta{0.0, -0.5 * alpha * h};
    std::vector<cplx> drive(n_tau + 1), drive_rate(n_tau + 1);
    std::vector<cplx> omega(n_tau + 1), omega_rate(n_tau + 1);
    std::vector<cplx> sba(n_tau + 1), sba_rate(n_tau + 1);
    for (long step = 0; step <= n_tau; ++step) {
        drive[step] = evaluate_pulse(s.signal, step * dt);
        drive_rate[step] = evaluate_pulse_rate(s.signal, step * dt);
    }
    rec.input_series = drive;

    Diagnostics diag{0.0, 1.0, 1.0};
    FieldSample fields;
    auto set_fields = [&](long step, const SigmaState& at, cplx self) {
        fields.omega1 = drive[step] + self * std::conj(at.coh_ab);
        fields.omega2 = c2[step];
        fields.omega3 = c3[step];
    };
    for (std::size_t k = 0; k < n; ++k) {
        const cplx self = k == 0 ? cplx{} : minus_i_beta;
        SigmaState st = ground_state();
        fields.detuning_shift_b = fields.detuning_shift_c = fields.detuning_shift_d = 0.0;
        for (long step = 0; step <= n_tau; ++step) {
            // Derivative at the start of this step; it doubles as the tau
            // derivative of sigma_ba handed to the next cell.
            const bool mag = step < n_tau && magnetic_on[step] != 0;
            fields.detuning_shift_b = mag ? shift.b : 0.0;
            fields.detuning_shift_c = mag ? shift.c : 0.0;
            fields.detuning_shift_d = mag ? shift.d : 0.0;
            set_fields(step, st, self);
            const SigmaState k1 = bloch_rhs(st, fields, sys);
            sba[step] = std::conj(st.coh_ab);
            sba_rate[step] = std::conj(k1.coh_ab);
            omega[step] = fields.omega1;
            omega_rate[step] = drive_rate[step] + self * sba_rate[step];
            for (std::size_t f : frames_at[step]) {
                frames[f].sigma[k] = st;
                frames[f].omega1[k] = omega[step];
            }
            if (step == n_tau)
                break;

            const cplx d_mid = 0.5 * (drive[step] + drive[step + 1]) +
                               (dt / 8.0) * (drive_rate[step] - drive_rate[step + 1]);
            st = rk4_step_from(st, k1, sys, dt,
                               [&](int stage, const SigmaState& at) -> const FieldSample& {
                                   const cplx own = self * std::conj(at.coh_ab);
                                   if (stage == 3) {
                                       fields.omega1 = drive[step + 1] + own;
                                       fields.omega2 = c2[step + 1];
                                       fields.omega3 = c3[step + 1];
                                   } else {
                                       fields.omega1 = d_mid + own;
                                       fields.omega2 = c2_mid[step];
                                       fields.omega3 = c3_mid[step];
                                   }
                                   return fields;
                               });
            if (!st.is_finite())
                throw DivergenceError("Maxwell-Bloch integration produced a non-finite state at xi = " +
                                          std::to_string(rec.grid.xi[k]),
                                      (step + 1) * dt, dt);
            diag.max_trace_drift = std::max(diag.max_trace_drift, std::abs(st.trace() - 1.0));
            diag.min_population = std::min(diag.min_population, st.min_population());
            diag.max_purity = std::max(diag.max_purity, st.purity());
        }
        if (k + 1 < n) {
            for (long step = 0; step <= n_tau; ++step) {
                drive[step] = omega[step] + minus_i_beta * sba[step];
                drive_rate[step] = omega_rate[step] + minus_i_beta * sba_rate[step];
            }
        }
    }
    rec.boundary_series = omega;

    auto finish = [&](std::size_t f) {
        Frame& fr = frames[f];
        Frame built = make_frame(fr.tau, fr.omega1, fr.sigma, fr.polariton, kappa);
        return built;
    };
    for (std::size_t f = 0; f < n_snapshots; ++f)
        rec.snapshots.push_back(finish(f));
    std::size_t next = n_snapshots;
    if (tl.has_release && stored_step >= 0 && stored_step <= n_tau)
        rec.stored_frame = finish(next++);
    if (tl.has_release && kicked_step >= 0 && kicked_step <= n_tau)
        rec.kicked_frame = finish(next++);
    rec.final_frame = finish(next);

    rec.diagnostics = diag;
    rec.metrics = compute_metrics(rec);
    if (rec.metrics.clipped)
        rec.warnings.emplace_back("released pulse clipped by t_final");
    if (diag.min_population < -1e-6 || diag.max_purity > 1.0 + 1e-6)
        rec.warnings.emplace_back("density matrix left the physical region; reduce grid.d_tau");
    if (tl.has_release && stored_step > n_tau)
        rec.warnings.emplace_back("storage time lies beyond t_final");
    return rec;
}

double convergence_probe(const Scenario& scenario, int factor)
{
    if (factor != 1 && factor != 2 && factor != 4)
        throw std::invalid_argument("convergence_probe: factor must be 1, 2 or 4");
    if (factor == 1)
        return 0.0;
    Scenario base = scenario;
    base.outputs = OutputRequest{};
    Scenario fine = base;
    fine.grid.n_xi = base.grid.n_xi * factor;
    fine.grid.d_tau = base.grid.d_tau / factor;
    const double coarse_peak = run_simulation(base).metrics.released_peak;
    const double fine_peak = run_simulation(fine).metrics.released_peak;
    if (coarse_peak == 0.0)
        return fine_peak == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(fine_peak - coarse_peak) / coarse_peak;
}

} // namespace tripod
