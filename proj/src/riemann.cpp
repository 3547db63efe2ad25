#include "selfsim/riemann.hpp"

#include <cmath>

#include "selfsim/errors.hpp"

namespace selfsim {

Composition compose_waves(SystemPtr sys, const Vec& v_left, const Vec& strengths) {
    const int m = sys->dim();
    if (strengths.dim() != m) raise(Errc::DimensionMismatch, "one strength per family required");

    Composition comp;
    comp.middle_states.push_back(v_left);
    Vec v = v_left;
    for (int a = 0; a < m; ++a) {
        const double s = strengths[a];
        Wave w;
        if (sys->field(a).kind == FieldKind::LinearlyDegenerate) {
            w = contact_wave(*sys, v, a, s);
        } else if (s >= 0.0) {
            w = make_fan_wave(*sys, v, a, s);
        } else {
            w = make_shock_wave(*sys, v, a, s);
        }
        v = w.v_plus;
        comp.waves.push_back(w);
        comp.middle_states.push_back(v);
    }
    comp.v_right = v;
    return comp;
}

RiemannSolution solve_riemann(SystemPtr sys, const Vec& v_left, const Vec& v_right,
                              Halfplane halfplane) {
    const int m = sys->dim();
    const Tolerances& tol = sys->tol();
    const double eps = sys->ball_radius();

    if ((v_left - sys->background()).norm() > 0.25 * eps ||
        (v_right - sys->background()).norm() > 0.25 * eps)
        raise(Errc::OutOfBall, "Riemann data must lie within a quarter of the ball radius");

    Vec s(m);
    Vec f = compose_waves(sys, v_left, s).v_right - v_right;
    Mat jac(m);
    bool have_jac = false;
    int it = 0;
    for (; it < tol.riemann_max_iter; ++it) {
        if (f.norm() <= tol.riemann_tol) break;
        if (!have_jac) {
            jac = fd_jacobian(
                [&](const Vec& str) { return compose_waves(sys, v_left, str).v_right - v_right; }, s,
                tol.newton_fd_step);
            have_jac = true;
        }
        const Vec step = solve_linear(jac, f);

        // damped update: keep intermediate states inside the ball
        double damping = 1.0;
        bool accepted = false;
        for (int tries = 0; tries < 10; ++tries) {
            const Vec cand = s - damping * step;
            try {
                const Vec fc = compose_waves(sys, v_left, cand).v_right - v_right;
                if (fc.norm() < f.norm() || damping < 1.0) {
                    s = cand;
                    f = fc;
                    accepted = true;
                    break;
                }
                // full step did not reduce the residual: refresh the Jacobian
                if (tries == 0 && fc.norm() >= f.norm()) {
                    s = cand;
                    f = fc;
                    have_jac = false;
                    accepted = true;
                    break;
                }
            } catch (const Error& e) {
                if (e.code() != Errc::LeftBall && e.code() != Errc::OutOfBall) throw;
                damping *= 0.5;
                have_jac = false;
            }
        }
        if (!accepted) raise(Errc::OutOfBall, "stepping repeatedly leaves the ball");
    }
    if (f.norm() > tol.riemann_tol) raise(Errc::NoConvergence, "strength iteration stalled");

    const Composition comp = compose_waves(sys, v_left, s);

    // waves must be strictly ordered in speed after dropping the vanishing ones
    double prev_hi = -std::numeric_limits<double>::infinity();
    for (const Wave& w : comp.waves) {
        if (std::fabs(w.strength) <= 1e-12) continue;
        if (!(w.speed_lo > prev_hi))
            raise(Errc::NoConvergence, "wave speeds failed to separate");
        prev_hi = w.speed_hi;
    }

    RiemannSolution sol{s, profile_from_waves(sys, halfplane, v_left, comp.waves), it};
    return sol;
}

RiemannSolution steady_riemann_2d(SystemPtr sys, const EulerState& u_upper,
                                  const EulerState& u_lower, Halfplane halfplane) {
    // the halfplane must be forward for every family; backward problems are
    // non-unique and are produced by the fixture generator only
    for (const FieldInfo& f : sys->fields()) {
        if (f.forward_halfplane != halfplane)
            throw std::invalid_argument(
                "requested halfplane is backward in time for this system; "
                "use the fixture generator for backward profiles");
    }

    const Vec v_upper = sys->to_V(u_upper.as_vec());
    const Vec v_lower = sys->to_V(u_lower.as_vec());

    // xi = y/x: for x > 0 the lower state is the xi -> -inf datum; for x < 0
    // the roles swap
    const Vec& v_left = (halfplane == Halfplane::XPos) ? v_lower : v_upper;
    const Vec& v_right = (halfplane == Halfplane::XPos) ? v_upper : v_lower;
    return solve_riemann(sys, v_left, v_right, halfplane);
}

} // namespace selfsim
