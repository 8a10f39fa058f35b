// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "tripod/analytic.hpp"
#include "tripod/bloch.hpp"
#include "tripod/propagator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

using namespace tripod;

namespace {

constexpr double pi = constants::pi;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail)
{
    std::printf("%s  %d  %-34s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

struct TimedRun
{
    SimulationRecord record;
    double seconds = 0.0;
};

TimedRun timed(const Scenario& s)
{
    const auto t0 = std::chrono::steady_clock::now();
    TimedRun r{run_simulation(s), 0.0};
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

Scenario kicked_storage(double delta)
{
    Scenario s = storage_scenario();
    s.outputs = OutputRequest{};
    s.magnetic->b_field = b_field_for_area(s, delta);
    return s;
}

// Local maxima of `a` over [first, end) that dominate a +-half_width window,
// exceed `floor`, and are separated by a dip below 90% of the smaller one.
std::vector<std::size_t> distinct_maxima(const std::vector<double>& a, std::size_t first,
                                         std::size_t half_width, double floor)
{
    std::vector<std::size_t> peaks;
    for (std::size_t i = first; i < a.size(); ++i) {
        if (a[i] <= floor)
            continue;
        const std::size_t lo = i > half_width ? i - half_width : 0;
        const std::size_t hi = std::min(a.size(), i + half_width + 1);
        if (*std::max_element(a.begin() + lo, a.begin() + hi) != a[i])
            continue;
        if (!peaks.empty()) {
            const std::size_t p = peaks.back();
            const double dip = *std::min_element(a.begin() + p, a.begin() + i);
            if (dip > 0.9 * std::min(a[p], a[i]))
                continue;
        }
        peaks.push_back(i);
    }
    return peaks;
}

double worst_trace = 0.0;

void note(const SimulationRecord& r)
{
    worst_trace = std::max(worst_trace, r.diagnostics.max_trace_drift);
}

} // namespace

int main()
{
    // Criteria 1-4: the storage sweep over the kick area.
    const std::vector<double> deltas = {0.0, pi / 2, pi, 3 * pi / 2, 2 * pi};
    std::map<double, TimedRun> runs;
    for (double d : deltas) {
        runs.emplace(d, timed(kicked_storage(d)));
        const TimedRun& r = runs.at(d);
        note(r.record);
        std::printf("      delta = %.4f  released %.6g  z %.6g  stored %.6g  %.1f s\n", d,
                    r.record.metrics.released_peak, r.record.metrics.z_peak,
                    r.record.metrics.stored_peak, r.seconds);
    }
    const double ref_peak = runs.at(0.0).record.metrics.released_peak;
    const double ref_z = runs.at(pi).record.metrics.z_peak;

    {
        double worst = 0.0, slowest = 0.0;
        for (double d : deltas) {
            const double ratio = runs.at(d).record.metrics.released_peak / ref_peak;
            worst = std::max(worst, std::abs(ratio - std::abs(std::cos(d / 2))));
            slowest = std::max(slowest, runs.at(d).seconds);
        }
        report(1, "released height vs |cos(d/2)|", worst <= 0.05 && slowest <= 60.0,
               fmt("max deviation %.3g (tol 0.05); slowest run %.1f s (limit 60 s)", worst, slowest));
    }
    {
        double worst = 0.0;
        for (double d : deltas) {
            const double ratio = runs.at(d).record.metrics.z_peak / ref_z;
            worst = std::max(worst, std::abs(ratio - std::abs(std::sin(d / 2))));
        }
        report(2, "trapped Z height vs |sin(d/2)|", worst <= 0.05,
               fmt("max deviation %.3g (tol 0.05)", worst));
    }
    {
        const auto& a = runs.at(0.0).record.boundary_series;
        const auto& b = runs.at(2 * pi).record.boundary_series;
        const std::size_t first = static_cast<std::size_t>(
            std::lround(storage_timeline(storage_scenario()).kicked_time / storage_scenario().grid.d_tau));
        double worst = 0.0;
        for (std::size_t i = first; i < a.size(); ++i)
            worst = std::max(worst, std::abs(a[i] - b[i]));
        const double rel = worst / ref_peak;
        report(3, "2 pi kick equals no kick", rel <= 0.02,
               fmt("max pointwise difference %.3g of peak (tol 0.02)", rel));
    }
    {
        double worst = 0.0;
        for (double d : {0.0, pi / 2, 3 * pi / 2}) {
            const SimulationRecord& r = runs.at(d).record;
            const ReleasePrediction p = released_pulse_prediction(r);
            worst = std::max(worst, std::abs(p.peak() - r.metrics.released_peak) /
                                        r.metrics.released_peak);
        }
        report(4, "predicted vs simulated release", worst <= 0.05,
               fmt("max relative peak difference %.3g over d = 0, pi/2, 3pi/2 (tol 0.05)", worst));
    }
    runs.clear();

    // 5: slow-light delay alpha / Omega^2 with Omega^2 = |Omega_2|^2 + |Omega_3|^2.
    {
        Scenario s = transparency_scenario();
        s.outputs = OutputRequest{};
        const TimedRun r = timed(s);
        note(r.record);
        const double omega2 = std::norm(s.control2(100.0)) + std::norm(s.control3(100.0));
        const double expected = s.coupling_alpha / omega2;
        const double delay = r.record.metrics.group_delay;
        report(5, "transparency group delay", std::abs(delay - expected) <= 0.1 * expected,
               fmt("delay %.4g vs alpha/Omega^2 = %.4g (tol 10%%)", delay, expected));
    }

    // 6: control 3 released 3.6 us before control 2.
    {
        Scenario s = delayed_release_scenario();
        s.outputs = OutputRequest{};
        const TimedRun r = timed(s);
        note(r.record);
        const SimulationRecord& rec = r.record;
        const double stored_peak = rec.metrics.stored_peak;
        std::vector<double> out(rec.boundary_series.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = std::abs(rec.boundary_series[i]);
        const double release = s.control3.release->t_start;
        const std::size_t first = static_cast<std::size_t>(std::lround(release / s.grid.d_tau));
        const auto peaks = distinct_maxima(out, first, static_cast<std::size_t>(2.0 / s.grid.d_tau),
                                           0.1 * stored_peak);
        std::string where;
        for (std::size_t i : peaks)
            where += fmt(" %.4g@%.1f", out[i], rec.tau[i]);
        report(6, "(a) two exit maxima", peaks.size() >= 2,
               fmt("%.0f maxima above %.3g:", static_cast<double>(peaks.size()), 0.1 * stored_peak) +
                   where);

        double scale = 0.0;
        for (const SigmaState& st : rec.stored_frame->sigma)
            scale = std::max(scale, std::hypot(std::abs(st.coh_bc), std::abs(st.coh_bd)));
        const double z = rec.metrics.z_peak;
        report(6, "(b) trapped Z after release", z > 0.3 * scale,
               fmt("max|Z| %.4g = %.3g x stored coherence scale %.4g (need > 0.3)", z, z / scale,
                   scale));

        double peak_bc = 0.0;
        for (const SigmaState& st : rec.final_frame.sigma)
            peak_bc = std::max(peak_bc, std::abs(st.coh_bc));
        double worst = 0.0;
        bool opposite = true;
        std::size_t cells = 0;
        for (const SigmaState& st : rec.final_frame.sigma) {
            if (std::abs(st.coh_bc) <= 0.1 * peak_bc)
                continue;
            ++cells;
            worst = std::max(worst, std::abs(std::abs(st.coh_bc) - std::abs(st.coh_bd)) / peak_bc);
            opposite = opposite && (st.coh_bc * std::conj(st.coh_bd)).real() < 0.0;
        }
        report(6, "(c) final coherences opposite", cells > 0 && worst <= 0.1 && opposite,
               fmt("||bc|-|bd||/max|bc| = %.3g on %.0f cells (tol 0.1); Re(bc bd*) < 0: ", worst,
                   static_cast<double>(cells)) +
                   (opposite ? "yes" : "no"));
    }

    // 7: invariants.
    {
        // Rabi flopping on a -> b without decay: pop_a = sin^2(Omega t).
        AtomicSystem sys;
        sys.gamma_ab = sys.gamma_ac = sys.gamma_ad = 0.0;
        const double omega = 1.0, dt = 0.01;
        FieldSample f;
        f.omega1 = omega;
        const StageFields fields{f, f, f};
        SigmaState st = ground_state();
        double rabi = 0.0;
        for (int i = 1; i <= 2000; ++i) {
            st = rk4_step(st, fields, sys, dt);
            rabi = std::max(rabi, std::abs(st.pop_a - std::pow(std::sin(omega * i * dt), 2)));
        }

        // Magnetic stage: Bloch integration through the window vs the phase kick.
        Scenario s = kicked_storage(pi / 2);
        s.grid = {30, 0.01, storage_timeline(s).kicked_time + 1.0};
        const SimulationRecord r = run_simulation(s);
        note(r);
        const DetuningShift shift = magnetic_detuning_shift(s);
        long steps = 0;
        for (long i = 0; i < s.grid.n_tau(); ++i) {
            const double mid = (i + 0.5) * s.grid.d_tau;
            steps += mid >= s.magnetic->t_start && mid < s.magnetic->t_end();
        }
        const double area_bc = (shift.b - shift.c) * s.grid.d_tau * steps;
        const double area_bd = (shift.b - shift.d) * s.grid.d_tau * steps;
        double kick = 0.0, scale = 0.0;
        for (std::size_t k = 0; k < r.stored_frame->sigma.size(); ++k) {
            const SigmaState& a = r.stored_frame->sigma[k];
            const SigmaState& b = r.kicked_frame->sigma[k];
            scale = std::max(scale, std::abs(a.coh_bc));
            kick = std::max(kick, std::abs(b.coh_bc - std::polar(1.0, area_bc) * a.coh_bc));
            kick = std::max(kick, std::abs(b.coh_bd - std::polar(1.0, area_bd) * a.coh_bd));
        }
        kick /= scale;

        // Zeeman chain from laboratory units.
        Scenario lab = storage_scenario();
        lab.magnetic->b_field = convert_units(lab.units, 3e-5, Unit::tesla, Unit::au_magnetic);
        lab.magnetic->duration = convert_units(lab.units, 2.4, Unit::microseconds, Unit::inverse_gamma);
        const double area = std::abs(magnetic_phase_area(lab).delta_bc);

        report(7, "trace conservation", worst_trace <= 1e-6,
               fmt("max |Tr - 1| %.3g over all runs (tol 1e-6)", worst_trace));
        report(7, "Rabi flopping", rabi <= 1e-5, fmt("max |pop_a - sin^2| %.3g (tol 1e-5)", rabi));
        report(7, "magnetic stage vs phase kick", kick <= 1e-6,
               fmt("max coherence difference %.3g of max|bc| (tol 1e-6)", kick));
        report(7, "Zeeman unit chain", std::abs(area - 2 * pi) <= 0.01 * 2 * pi,
               fmt("|delta| %.5g rad for 3e-5 T over 2.4 us; 2 pi within %.3g%% (tol 1%%)", area,
                   100.0 * std::abs(area - 2 * pi) / (2 * pi)));
    }

    // 8: grid refinement by 2 on the storage scenario.
    {
        const double change = convergence_probe(kicked_storage(0.0), 2);
        report(8, "convergence under refinement", change <= 0.01,
               fmt("relative change of released peak %.3g (tol 0.01)", change));
    }

    std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
