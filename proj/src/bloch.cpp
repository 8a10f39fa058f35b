#include "tripod/bloch.hpp"

#include "tripod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tripod {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace

double SigmaState::purity() const
{
    return pop_a * pop_a + pop_b * pop_b + pop_c * pop_c + pop_d * pop_d +
           2.0 * (std::norm(coh_ab) + std::norm(coh_ac) + std::norm(coh_ad) +
                  std::norm(coh_bc) + std::norm(coh_bd) + std::norm(coh_cd));
}

double SigmaState::min_population() const
{
    return std::min({pop_a, pop_b, pop_c, pop_d});
}

bool SigmaState::is_finite() const
{
    return std::isfinite(pop_a) && std::isfinite(pop_b) && std::isfinite(pop_c) &&
           std::isfinite(pop_d) && finite(coh_ab) && finite(coh_ac) && finite(coh_ad) &&
           finite(coh_bc) && finite(coh_bd) && finite(coh_cd);
}

SigmaState& SigmaState::operator+=(const SigmaState& o)
{
    pop_a += o.pop_a;
    pop_b += o.pop_b;
    pop_c += o.pop_c;
    pop_d += o.pop_d;
    coh_ab += o.coh_ab;
    coh_ac += o.coh_ac;
    coh_ad += o.coh_ad;
    coh_bc += o.coh_bc;
    coh_bd += o.coh_bd;
    coh_cd += o.coh_cd;
    return *this;
}

SigmaState& SigmaState::operator*=(double s)
{
    pop_a *= s;
    pop_b *= s;
    pop_c *= s;
    pop_d *= s;
    coh_ab *= s;
    coh_ac *= s;
    coh_ad *= s;
    coh_bc *= s;
    coh_bd *= s;
    coh_cd *= s;
    return *this;
}

SigmaState zero_state()
{
    SigmaState z;
    z.pop_b = 0.0;
    return z;
}

SigmaState bloch_rhs(const SigmaState& s, const FieldSample& f, const AtomicSystem& sys)
{
    constexpr cplx minus_i{0.0, -1.0};
    const double gamma = sys.gamma_total();

    // Level shifts enter through the detunings, Delta_j -> Delta_j + dE_j - dE_a
    // for j = b, c, d. Each coherence then rotates as follows:
    //   sigma_ab : Delta_1 + (dE_b - dE_a)
    //   sigma_ac : Delta_2 + (dE_c - dE_a)
    //   sigma_ad : Delta_3 + (dE_d - dE_a)
    //   sigma_bc : Delta_2 - Delta_1 + (dE_c - dE_b)
    //   sigma_bd : Delta_3 - Delta_1 + (dE_d - dE_b)
    //   sigma_cd : Delta_3 - Delta_2 + (dE_d - dE_c)
    const double d1 = sys.delta1 + f.detuning_shift_b;
    const double d2 = sys.delta2 + f.detuning_shift_c;
    const double d3 = sys.delta3 + f.detuning_shift_d;

    const cplx o1 = f.omega1, o2 = f.omega2, o3 = f.omega3;
    const cplx o1c = std::conj(o1), o2c = std::conj(o2), o3c = std::conj(o3);

    const cplx s_ba = std::conj(s.coh_ab);
    const cplx s_ca = std::conj(s.coh_ac);
    const cplx s_cb = std::conj(s.coh_bc);
    const cplx s_db = std::conj(s.coh_bd);
    const cplx s_dc = std::conj(s.coh_cd);

    // Omega_j sigma_aj - c.c. = 2i Im(Omega_j sigma_aj)
    const double flow_b = 2.0 * std::imag(o1 * s.coh_ab);
    const double flow_c = 2.0 * std::imag(o2 * s.coh_ac);
    const double flow_d = 2.0 * std::imag(o3 * s.coh_ad);

    SigmaState r;
    r.pop_a = flow_b + flow_c + flow_d - gamma * s.pop_a;
    r.pop_b = -flow_b + sys.gamma_ab * s.pop_a;
    r.pop_c = -flow_c + sys.gamma_ac * s.pop_a;
    r.pop_d = -flow_d + sys.gamma_ad * s.pop_a;

    const cplx half_width{0.0, -0.5 * gamma};
    r.coh_ab = minus_i * ((d1 + half_width) * s.coh_ab - o1c * (s.pop_b - s.pop_a) -
                          o2c * s_cb - o3c * s_db);
    r.coh_ac = minus_i * ((d2 + half_width) * s.coh_ac - o2c * (s.pop_c - s.pop_a) -
                          o1c * s.coh_bc - o3c * s_dc);
    r.coh_ad = minus_i * ((d3 + half_width) * s.coh_ad - o3c * (s.pop_d - s.pop_a) -
                          o1c * s.coh_bd - o2c * s.coh_cd);
    r.coh_bc = minus_i * ((d2 - d1) * s.coh_bc - o1 * s.coh_ac + o2c * s_ba);
    r.coh_bd = minus_i * ((d3 - d1) * s.coh_bd - o1 * s.coh_ad + o3c * s_ba);
    r.coh_cd = minus_i * ((d3 - d2) * s.coh_cd - o2 * s.coh_ad + o3c * s_ca);
    return r;
}

SigmaState rk4_step(const SigmaState& state, const StageFields& fields,
                    const AtomicSystem& system, double dt, double t)
{
    if (!(dt > 0))
        throw std::invalid_argument("rk4_step: dt must be positive");
    const SigmaState k1 = bloch_rhs(state, fields[0], system);
    const SigmaState next = rk4_step_from(
        state, k1, system, dt,
        [&](int stage, const SigmaState&) -> const FieldSample& {
            return fields[stage == 3 ? 2 : 1];
        });
    if (!next.is_finite())
        throw DivergenceError("Bloch integration produced a non-finite state", t, dt);
    return next;
}

} // namespace tripod
