#include "tripod/decoupling.hpp"
#include "tripod/errors.hpp"
#include "tripod/polariton.hpp"
#include "tripod/propagator.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace tripod;
using doctest::Approx;

namespace {

constexpr double pi = constants::pi;

PolaritonFrame bare_frame(double theta, double phi)
{
    PolaritonFrame f;
    f.theta = theta;
    f.phi = phi;
    return f;
}

} // namespace

TEST_CASE("mixing angles of equal real controls")
{
    const PolaritonFrame f = mixing_frame(5.0, 5.0, 10.0, 0.0);
    CHECK(f.phi == Approx(pi / 4));
    CHECK(f.omega_norm == Approx(std::sqrt(50.0)));
    CHECK(std::tan(f.theta) == Approx(10.0 / std::sqrt(50.0)));
    CHECK(f.chi2 == 0.0);
    CHECK(f.chi3 == 0.0);
    CHECK_FALSE(f.held);
}

TEST_CASE("mixing angles follow the control phases")
{
    const PolaritonFrame f = mixing_frame(std::polar(3.0, 0.4), std::polar(4.0, -1.1), 2.0, 0.7);
    CHECK(f.phi == Approx(std::atan2(4.0, 3.0)));
    CHECK(f.omega_norm == Approx(5.0));
    CHECK(f.chi2 == Approx(0.4));
    CHECK(f.chi3 == Approx(-1.1));
    CHECK(f.chi == 0.7);
}

TEST_CASE("chi rate weights the control phase rates")
{
    const PolaritonFrame f = bare_frame(pi / 2, pi / 6);
    CHECK(chi_rate(f, 2.0, 4.0) == Approx(0.75 * 2.0 + 0.25 * 4.0));
    CHECK(chi_rate(bare_frame(0.0, pi / 6), 2.0, 4.0) == Approx(0.0).scale(1.0));
}

TEST_CASE("polariton examples")
{
    const PolaritonFrame f = bare_frame(pi / 2, pi / 4);
    CHECK(dark_polariton(0.0, 0.1, 0.1, f, 2.0).real() == Approx(-0.2828427).epsilon(1e-6));
    CHECK(std::abs(z_polariton(0.1, 0.0, f)) == Approx(0.0707107).epsilon(1e-6));
    // a pure light field in the weak-coupling limit
    CHECK(dark_polariton(0.3, 0.0, 0.0, bare_frame(0.0, 0.3), 2.0).real() == Approx(0.3));
}

TEST_CASE("the bright combination is orthogonal to Z")
{
    // Psi's atomic part and Z are orthonormal combinations of (sigma_bc, sigma_bd).
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const PolaritonFrame f = mixing_frame(cplx{u(rng), u(rng)}, cplx{u(rng), u(rng)}, 3.0, 0.0);
        const cplx bc{u(rng), u(rng)};
        const cplx bd{u(rng), u(rng)};
        // Psi with theta = pi/2 and kappa = 1 is minus the atomic part
        PolaritonFrame g = f;
        g.theta = pi / 2;
        const cplx atomic = -dark_polariton(0.0, bc, bd, g, 1.0);
        const cplx z = z_polariton(bc, bd, f);
        CHECK(std::norm(atomic) + std::norm(z) ==
              Approx(std::norm(bc) + std::norm(bd)).epsilon(1e-12));
    }
}

TEST_CASE("polariton matches its definition")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        PolaritonFrame f = mixing_frame(cplx{u(rng), u(rng)}, cplx{u(rng), u(rng)}, 4.0, u(rng));
        const cplx e1{u(rng), u(rng)}, bc{u(rng), u(rng)}, bd{u(rng), u(rng)};
        const cplx expect =
            std::exp(cplx{0.0, -f.chi}) *
            (std::cos(f.theta) * e1 -
             4.0 * std::sin(f.theta) *
                 (std::cos(f.phi) * std::exp(cplx{0.0, f.chi2}) * bc +
                  std::sin(f.phi) * std::exp(cplx{0.0, f.chi3}) * bd));
        CHECK(std::abs(dark_polariton(e1, bc, bd, f, 4.0) - expect) <= 1e-12);
    }
}

TEST_CASE("frame tracker holds the branch while the controls are dark")
{
    FrameTracker tr(2.0);
    tr.update(0.0, 1.0, std::sqrt(3.0));
    const PolaritonFrame held = tr.update(1.0, 0.0, 0.0);
    CHECK(held.held);
    CHECK(held.phi == Approx(pi / 3));
    CHECK(held.theta == Approx(pi / 2));
    const PolaritonFrame back = tr.update(2.0, 1.0, 1.0);
    CHECK_FALSE(back.held);
    CHECK(back.phi == Approx(pi / 4));
}

TEST_CASE("frame tracker integrates chi for a chirped control")
{
    // Omega_2 = Omega_3 = exp(i w t): chi' = sin^2(theta) w, constant here.
    const double w = 0.3, kappa = 2.0;
    FrameTracker tr(kappa);
    const double dt = 0.01;
    for (int i = 0; i <= 1000; ++i) {
        const cplx c = std::polar(1.0, w * i * dt);
        tr.update(i * dt, c, c);
    }
    const PolaritonFrame& f = *tr.current();
    CHECK(f.chi == Approx(std::pow(std::sin(f.theta), 2) * w * 10.0).epsilon(1e-9));
}

TEST_CASE("stored polariton travels at Omega^2 / alpha")
{
    Scenario s = transparency_scenario();
    s.outputs = OutputRequest{};
    s.outputs.snapshot_times = {45.0, 75.0};
    const SimulationRecord r = run_simulation(s);
    REQUIRE(r.snapshots.size() == 2);
    auto centre = [&](const Frame& f) {
        std::vector<double> a;
        for (cplx p : f.psi)
            a.push_back(std::abs(p));
        return refined_peak_time(r.grid.xi, a);
    };
    const double omega = std::abs(s.control2(60.0)) * std::sqrt(2.0);
    const double speed = omega * omega / s.coupling_alpha;
    const double moved = centre(r.snapshots[1]) - centre(r.snapshots[0]);
    CHECK(std::abs(moved - 30.0 * speed) <= 2.0 * r.grid.spacing());
}

TEST_CASE("with equal controls the Z polariton is not excited")
{
    Scenario s = storage_scenario();
    s.grid = {150, 0.02, 120.0};
    s.outputs.snapshot_interval = 2.0;
    const SimulationRecord r = run_simulation(s);
    double z_max = 0.0, psi_max = 0.0;
    for (const Frame& f : r.snapshots) {
        for (cplx z : f.z)
            z_max = std::max(z_max, std::abs(z));
        for (cplx p : f.psi)
            psi_max = std::max(psi_max, std::abs(p));
    }
    CHECK(psi_max > 0.0);
    CHECK(z_max <= 0.05 * psi_max / s.system.kappa);
}

TEST_CASE("decoupling residuals")
{
    Scenario s = storage_scenario();
    s.outputs.snapshot_interval = 1.0;
    const SimulationRecord r = run_simulation(s);
    const DecouplingResidual d = decoupling_residual(r, 0.0, s.grid.t_final);
    CHECK(d.frames_used > 100);
    CHECK(d.decoupled_z <= 0.05);
    CHECK(d.coupled_z <= 0.05);
    MESSAGE("storage run: coupled psi " << d.coupled_psi << ", decoupled psi " << d.decoupled_psi);

    Scenario dark = s;
    dark.signal = PulseShape{};
    dark.grid = {40, 0.02, 60.0};
    const DecouplingResidual z = decoupling_residual(run_simulation(dark), 0.0, 60.0);
    CHECK(z.coupled_psi == 0.0);
    CHECK(z.decoupled_z == 0.0);

    CHECK_THROWS_AS(decoupling_residual(r, 10.0, 10.5), AnalysisError);
}

TEST_CASE("decoupling residual of the staggered release")
{
    Scenario s = delayed_release_scenario();
    s.outputs.snapshot_interval = 1.0;
    const SimulationRecord r = run_simulation(s);
    const DecouplingResidual d = decoupling_residual(r, 100.0, s.grid.t_final);
    CHECK(d.frames_used > 0);
    MESSAGE("staggered release: coupled z " << d.coupled_z << ", decoupled z " << d.decoupled_z
                                            << ", decoupled psi " << d.decoupled_psi);
}
