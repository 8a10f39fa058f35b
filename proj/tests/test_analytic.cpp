#include "tripod/analytic.hpp"
#include "tripod/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace tripod;
using doctest::Approx;

namespace {

constexpr double pi = constants::pi;

bool close(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

} // namespace

TEST_CASE("split of equal stored coherences")
{
    const cplx s0{0.1, 0.0};
    SUBCASE("no kick keeps everything in the released part")
    {
        const CoherenceSplit c = split_coherences(s0, s0, pi / 4, 0.0);
        CHECK(close(c.sigma_bc_prime, s0));
        CHECK(close(c.sigma_bd_prime, s0));
        CHECK(std::abs(c.sigma_bc_dprime) <= 1e-15);
        CHECK(std::abs(c.sigma_bd_dprime) <= 1e-15);
    }
    SUBCASE("delta = pi leaves only the trapped part")
    {
        const CoherenceSplit c = split_coherences(s0, s0, pi / 4, pi);
        CHECK(std::abs(c.sigma_bc_prime) <= 1e-15);
        CHECK(close(c.sigma_bc_dprime, -s0));
        CHECK(close(c.sigma_bd_dprime, s0));
    }
    SUBCASE("delta = pi/2")
    {
        // prime = s0 (e^{i delta} + 1) / 2, dprime = +-s0 (e^{i delta} - 1) / 2
        const CoherenceSplit c = split_coherences(s0, s0, pi / 4, pi / 2);
        CHECK(close(c.sigma_bc_prime, cplx{0.05, 0.05}));
        CHECK(close(c.sigma_bd_prime, cplx{0.05, 0.05}));
        CHECK(close(c.sigma_bc_dprime, cplx{-0.05, 0.05}));
        CHECK(close(c.sigma_bd_dprime, cplx{0.05, -0.05}));
    }
}

TEST_CASE("split closed forms on a general branch")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> ang(0.05, pi / 2 - 0.05);
    for (int i = 0; i < 200; ++i) {
        const double phi = ang(rng);
        const double delta = 4.0 * pi * u(rng);
        const cplx bc0{u(rng), u(rng)};
        const cplx bd0 = std::tan(phi) * bc0;
        const CoherenceSplit c = split_coherences(bc0, bd0, phi, delta);
        const double cp = std::cos(phi), sp = std::sin(phi);
        const cplx e = std::exp(cplx{0.0, delta});
        // sigma' = cos(phi) (cos^2 phi e^{i delta} + sin^2 phi) sigma0 / cos(phi) on the branch
        const cplx released = (cp * cp * e + sp * sp) * bc0;
        CHECK(close(c.sigma_bc_prime, released, 1e-12));
        CHECK(close(c.sigma_bd_prime, std::tan(phi) * released, 1e-11));
        CHECK(close(c.sigma_bc_dprime, sp * sp * (e - 1.0) * bc0, 1e-12));
        CHECK(close(c.sigma_bd_dprime, -sp * cp * (e - 1.0) * bc0, 1e-12));
        // the parts recombine to the kicked state
        CHECK(close(c.sigma_bc_prime + c.sigma_bc_dprime, e * bc0, 1e-12));
        CHECK(close(c.sigma_bd_prime + c.sigma_bd_dprime, bd0, 1e-12));
    }
}

TEST_CASE("misaligned stored coherences are rejected")
{
    CHECK_THROWS_AS(split_coherences(0.1, 0.05, pi / 4, 0.3), AnalysisError);
    CHECK_NOTHROW(split_coherences(0.1, 0.1 * (1 + 1e-8), pi / 4, 0.3));
    CHECK_NOTHROW(split_coherences(0.1, 0.05, pi / 4, 0.3, 0.0, 0.5));
}

TEST_CASE("height factor examples and periodicity")
{
    CHECK(released_height_factor(pi / 4, 0.0) == Approx(1.0));
    CHECK(released_height_factor(pi / 4, pi / 2) == Approx(std::sqrt(0.5)));
    CHECK(released_height_factor(pi / 4, pi) == Approx(0.0).scale(1.0));
    CHECK(released_height_factor(0.0, pi) == Approx(1.0));
    CHECK(released_height_factor(pi / 6, pi) == Approx(0.5));
    for (double d : {0.3, 1.7, 2.9})
        CHECK(released_height_factor(0.4, d + 2 * pi) == Approx(released_height_factor(0.4, d)));
    CHECK(released_phase(pi / 4, pi / 2) == Approx(pi / 4));
    CHECK(released_phase(pi / 4, 0.0) == 0.0);
}

TEST_CASE("height factor is the norm of the released projection")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ang(0.0, pi / 2);
    std::uniform_real_distribution<double> d(-2 * pi, 2 * pi);
    for (int i = 0; i < 1000; ++i) {
        const double phi = ang(rng), delta = d(rng);
        const cplx bc0 = std::cos(phi), bd0 = std::sin(phi);
        const CoherenceSplit c = split_coherences(bc0, bd0, phi, delta);
        const double norm = std::hypot(std::abs(c.sigma_bc_prime), std::abs(c.sigma_bd_prime));
        CHECK(released_height_factor(phi, delta) == Approx(norm).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("trapped Z amplitude")
{
    CHECK(std::abs(trapped_z_amplitude(0.1, pi / 4, pi)) == Approx(0.1414214).epsilon(1e-6));
    CHECK(std::abs(trapped_z_amplitude(0.1, pi / 4, 0.0)) == 0.0);
    // agrees with Z built from the split parts
    const double phi = 0.6, delta = 1.3;
    const cplx bc0{0.02, -0.01};
    const CoherenceSplit c = split_coherences(bc0, std::tan(phi) * bc0, phi, delta);
    PolaritonFrame f;
    f.phi = phi;
    const cplx z = z_polariton(c.sigma_bc_dprime, c.sigma_bd_dprime, f);
    CHECK(close(z, trapped_z_amplitude(bc0, phi, delta), 1e-15));
    CHECK(std::abs(z_polariton(c.sigma_bc_prime, c.sigma_bd_prime, f)) <= 1e-15);
}

TEST_CASE("prediction with dark controls stays inside")
{
    std::vector<double> xi(101);
    std::vector<cplx> psi(101);
    for (std::size_t k = 0; k < xi.size(); ++k) {
        xi[k] = k / 100.0;
        psi[k] = std::exp(-std::pow((xi[k] - 0.5) / 0.1, 2));
    }
    const ThetaHistory h{{0.0, 10.0, 20.0}, {pi / 2, pi / 2, pi / 2}};
    const ReleasePrediction p = released_pulse_prediction(xi, psi, h, 100.0, 4000.0);
    CHECK(p.peak() <= 1e-15);
    CHECK(p.incomplete);
    CHECK_FALSE(p.warnings.empty());
}

TEST_CASE("prediction translates the profile rigidly")
{
    std::vector<double> xi(401);
    std::vector<cplx> psi(401);
    auto profile = [](double x) { return std::exp(-std::pow((x - 0.5) / 0.1, 2)); };
    for (std::size_t k = 0; k < xi.size(); ++k) {
        xi[k] = k / 400.0;
        psi[k] = profile(xi[k]);
    }
    const double kappa = 50.0, alpha = 4000.0, theta = std::atan2(kappa, 10.0);
    const double v = 100.0 / alpha;
    ThetaHistory h;
    for (int i = 0; i <= 800; ++i) {
        h.tau.push_back(0.1 * i);
        h.theta.push_back(theta);
    }
    const ReleasePrediction p = released_pulse_prediction(xi, psi, h, kappa, alpha);
    for (std::size_t i = 0; i < h.tau.size(); i += 50) {
        const double x = 1.0 - v * h.tau[i];
        const double expect = x >= 0.0 ? std::cos(theta) * profile(x) : 0.0;
        CHECK(p.shift[i] == Approx(v * h.tau[i]).epsilon(1e-12));
        CHECK(p.omega1[i].real() == Approx(expect).epsilon(1e-3).scale(1e-3));
    }
    CHECK(p.peak() == Approx(std::cos(theta)).epsilon(1e-4));
    CHECK_FALSE(p.incomplete);
}

TEST_CASE("predicted release matches the simulation")
{
    for (double delta : {0.0, pi / 2}) {
        Scenario s = storage_scenario();
        s.magnetic->b_field = b_field_for_area(s, delta);
        const SimulationRecord r = run_simulation(s);
        const ReleasePrediction p = released_pulse_prediction(r);
        CHECK_FALSE(p.incomplete);
        CHECK(p.peak() == Approx(r.metrics.released_peak).epsilon(0.05));
    }
}

TEST_CASE("adiabatic relations")
{
    Scenario s = transparency_scenario();
    s.grid = {100, 0.01, 60.0};
    s.outputs.snapshot_interval = 0.1;

    SUBCASE("hold for a slow pulse")
    {
        const AdiabaticResidual a = adiabatic_check(run_simulation(s));
        CHECK(a.frames_used > 100);
        CHECK(a.omega1_residual <= 0.05);
        CHECK(a.rate_match_residual <= 0.05);
    }
    SUBCASE("fail for a pulse shorter than the transparency response")
    {
        s.signal.t_end = 2.0;
        CHECK(adiabatic_check(run_simulation(s)).omega1_residual > 0.05);
    }
    SUBCASE("vanish without a signal")
    {
        s.signal = PulseShape{};
        const AdiabaticResidual a = adiabatic_check(run_simulation(s));
        CHECK(a.omega1_residual == 0.0);
        CHECK(a.rate_match_residual == 0.0);
    }
    SUBCASE("need lit controls")
    {
        s.control2 = ControlField{};
        s.control3 = ControlField{};
        CHECK_THROWS_AS(adiabatic_check(run_simulation(s)), AnalysisError);
    }
}

TEST_CASE("adiabatic check on the storage run")
{
    Scenario s = storage_scenario();
    s.outputs.snapshot_interval = 1.0;
    const AdiabaticResidual a = adiabatic_check(run_simulation(s));
    CHECK(a.omega1_residual <= 0.05);
}

TEST_CASE("theta history follows the controls")
{
    const Scenario s = storage_scenario();
    const ThetaHistory h = theta_history(s, 100.0, 200.0, 0.5);
    REQUIRE(h.tau.size() == 201);
    CHECK(h.theta.front() == Approx(pi / 2).epsilon(1e-9));
    CHECK(std::tan(h.theta.back()) == Approx(s.system.kappa / (5.0 * std::sqrt(2.0))).epsilon(1e-9));
    CHECK_THROWS(theta_history(s, 1.0, 0.0, 0.1));
}
