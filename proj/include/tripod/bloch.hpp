#pragma once

#include "tripod/model.hpp"

#include <array>

namespace tripod {

// Upper triangle of the 4x4 density matrix in the rotating frame. The lower
// triangle follows from Hermiticity, so populations are real by construction.
struct SigmaState
{
    double pop_a = 0.0;
    double pop_b = 1.0;
    double pop_c = 0.0;
    double pop_d = 0.0;
    cplx coh_ab{};
    cplx coh_ac{};
    cplx coh_ad{};
    cplx coh_bc{};
    cplx coh_bd{};
    cplx coh_cd{};

    double trace() const { return pop_a + pop_b + pop_c + pop_d; }
    // Tr(sigma^2)
    double purity() const;
    double min_population() const;
    bool is_finite() const;

    SigmaState& operator+=(const SigmaState& o);
    SigmaState& operator*=(double s);

    bool operator==(const SigmaState&) const = default;
};

inline SigmaState operator+(SigmaState a, const SigmaState& b) { return a += b; }
inline SigmaState operator*(double s, SigmaState a) { return a *= s; }

// All atoms in b, the state every cell starts from.
inline SigmaState ground_state() { return {}; }

// A zeroed state, the additive identity for derivatives.
SigmaState zero_state();

struct FieldSample
{
    cplx omega1{};
    cplx omega2{};
    cplx omega3{};
    // Added to Delta_1, Delta_2, Delta_3 respectively during the magnetic stage.
    double detuning_shift_b = 0.0;
    double detuning_shift_c = 0.0;
    double detuning_shift_d = 0.0;
};

// d(sigma)/dt for the tripod Bloch equations.
SigmaState bloch_rhs(const SigmaState& state, const FieldSample& fields,
                     const AtomicSystem& system);

// Field samples at t, t + dt/2 and t + dt.
using StageFields = std::array<FieldSample, 3>;

// Classical fourth-order Runge-Kutta step. Throws DivergenceError when the
// result is not finite; `t` only labels the diagnostic.
SigmaState rk4_step(const SigmaState& state, const StageFields& fields,
                    const AtomicSystem& system, double dt, double t = 0.0);

// RK4 step whose fields may depend on the stage state. `fields(i, s)` is called
// for stages i = 1..3 (times t + dt/2, t + dt/2, t + dt); `k1` is the
// derivative at the start of the step. No finiteness check.
template <class StageFn>
SigmaState rk4_step_from(const SigmaState& state, const SigmaState& k1,
                         const AtomicSystem& system, double dt, StageFn&& fields)
{
    const SigmaState s2 = state + (0.5 * dt) * k1;
    const SigmaState k2 = bloch_rhs(s2, fields(1, s2), system);
    const SigmaState s3 = state + (0.5 * dt) * k2;
    const SigmaState k3 = bloch_rhs(s3, fields(2, s3), system);
    const SigmaState s4 = state + dt * k3;
    const SigmaState k4 = bloch_rhs(s4, fields(3, s4), system);

    SigmaState next = state;
    next += (dt / 6.0) * k1;
    next += (dt / 3.0) * k2;
    next += (dt / 3.0) * k3;
    next += (dt / 6.0) * k4;
    return next;
}

} // namespace tripod
