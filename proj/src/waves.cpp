#include "selfsim/waves.hpp"

#include <algorithm>
#include <cmath>

#include "selfsim/errors.hpp"

namespace selfsim {

const char* wave_kind_name(WaveKind k) {
    switch (k) {
        case WaveKind::Shock: return "shock";
        case WaveKind::SimpleWave: return "simple";
        case WaveKind::Contact: return "contact";
    }
    return "?";
}

namespace {

int rk4_steps(const SystemDef& sys, double s) {
    const double per_eps = static_cast<double>(sys.tol().fan_steps_per_eps);
    const int n = static_cast<int>(std::ceil(per_eps * std::fabs(s) / sys.ball_radius()));
    return std::max(sys.tol().min_rk4_steps, n);
}

} // namespace

OdePath simple_wave_path(const SystemDef& sys, const Vec& v_minus, int family, double s) {
    if (!sys.in_ball(v_minus)) raise(Errc::OutOfBall, "curve start outside the ball");
    auto rhs = [&sys, family](double, const Vec& v) {
        if (!sys.in_ball(v)) raise(Errc::LeftBall, "simple-wave curve left the ball");
        return sys.eigen(v).right[family];
    };
    if (s == 0.0) {
        OdePath p;
        p.s = {0.0};
        p.y = {v_minus};
        return p;
    }
    OdePath path = ode_rk4(rhs, v_minus, 0.0, s, rk4_steps(sys, s));
    for (const Vec& y : path.y)
        if (!sys.in_ball(y)) raise(Errc::LeftBall, "simple-wave curve left the ball");
    return path;
}

Vec simple_wave_curve(const SystemDef& sys, const Vec& v_minus, int family, double s) {
    return simple_wave_path(sys, v_minus, family, s).endpoint();
}

WaveFan::WaveFan(SystemPtr sys, Vec v_minus, int family, double strength)
    : sys_(std::move(sys)), family_(family), strength_(strength) {
    if (sys_->field(family).kind != FieldKind::GenuinelyNonlinear)
        raise(Errc::NotGNL, "wave fans require a genuinely nonlinear family");
    if (strength < 0.0) throw std::invalid_argument("fan strength must be non-negative");

    path_ = simple_wave_path(*sys_, v_minus, family, strength);
    lambda_.reserve(path_.y.size());
    for (const Vec& v : path_.y) lambda_.push_back(sys_->eigenvalue(v, family_));
    for (std::size_t i = 0; i + 1 < lambda_.size(); ++i)
        if (!(lambda_[i] < lambda_[i + 1]))
            raise(Errc::NotGNL, "characteristic speed fails to increase along the fan");
    xi_lo_ = lambda_.front();
    xi_hi_ = lambda_.back();
}

double WaveFan::param_at(double xi) const {
    if (xi <= xi_lo_) return 0.0;
    if (xi >= xi_hi_) return strength_;
    // bracket on the cached samples, then Newton on the local RK4 restart
    const auto it = std::upper_bound(lambda_.begin(), lambda_.end(), xi);
    std::size_t k = static_cast<std::size_t>(it - lambda_.begin()) - 1;
    double s_lo = path_.s[k], s_hi = path_.s[k + 1];
    double lam_lo = lambda_[k], lam_hi = lambda_[k + 1];

    const Tolerances& tol = sys_->tol();
    double s = s_lo + (xi - lam_lo) / (lam_hi - lam_lo) * (s_hi - s_lo);
    for (int iter = 0; iter < 60; ++iter) {
        const Vec v = ode_rk4([this](double, const Vec& y) { return sys_->eigen(y).right[family_]; },
                              path_.y[k], path_.s[k], s, 4)
                          .endpoint();
        const double lam = sys_->eigenvalue(v, family_);
        const double err = lam - xi;
        if (std::fabs(err) <= tol.fan_invert_tol) return s;
        const double slope = sys_->gnl_indicator(v, family_); // d lambda / d s
        double s_next = s - err / slope;
        if (err > 0.0)
            s_hi = s;
        else
            s_lo = s;
        if (!(s_next > s_lo && s_next < s_hi)) s_next = 0.5 * (s_lo + s_hi);
        s = s_next;
    }
    raise(Errc::NoConvergence, "fan inversion stalled");
}

Vec WaveFan::at(double xi) const {
    if (xi <= xi_lo_) return path_.y.front();
    if (xi >= xi_hi_) return path_.y.back();
    const double s = param_at(xi);
    const auto it = std::upper_bound(path_.s.begin(), path_.s.end(), s);
    const std::size_t k = std::min(path_.s.size() - 2, static_cast<std::size_t>(it - path_.s.begin()) - 1);
    return ode_rk4([this](double, const Vec& y) { return sys_->eigen(y).right[family_]; }, path_.y[k],
                   path_.s[k], s, 4)
        .endpoint();
}

WaveFan wave_fan(SystemPtr sys, const Vec& v_minus, int family, double s) {
    return WaveFan(std::move(sys), v_minus, family, s);
}

namespace {

// One continuation target: solve V+ = V- + s rhat(V+, V-).  The step map has
// Jacobian I + O(s), so a chord iteration converges fast; fall back to a
// finite-difference Newton if it stalls.
Vec solve_shock_state(const SystemDef& sys, const Vec& v_minus, int family, double s, Vec guess) {
    const Tolerances& tol = sys.tol();
    auto step = [&](const Vec& vp) {
        const EigenDecomp hat = sys.hat_eigen(vp, v_minus);
        return v_minus + s * hat.right[family];
    };

    Vec v = guess;
    for (int iter = 0; iter < 24; ++iter) {
        const Vec next = step(v);
        if (!sys.in_ball(next)) raise(Errc::LeftBall, "shock curve left the ball");
        const double delta = (next - v).norm();
        v = next;
        if (delta <= tol.newton_tol) return v;
    }

    NewtonOptions opts;
    opts.tol = tol.newton_tol;
    opts.max_iter = tol.newton_max_iter;
    auto residual = [&](const Vec& vp) { return vp - step(vp); };
    return newton_solve(residual, v, opts).x;
}

} // namespace

std::vector<std::pair<double, ShockPoint>> shock_curve_path(const SystemDef& sys, const Vec& v_minus,
                                                            int family, double s) {
    if (!sys.in_ball(v_minus)) raise(Errc::OutOfBall, "curve start outside the ball");

    std::vector<std::pair<double, ShockPoint>> knots;
    knots.push_back({0.0, {v_minus, sys.eigenvalue(v_minus, family)}});
    if (s == 0.0) return knots;

    const double step = sys.ball_radius() * sys.tol().shock_step_fraction;
    const int n = std::max(1, static_cast<int>(std::ceil(std::fabs(s) / step)));

    Vec v = v_minus;
    Vec tangent = sys.eigen(v_minus).right[family];
    double s_prev = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double sk = s * (static_cast<double>(k) / n);
        const Vec guess = v + (sk - s_prev) * tangent;
        v = solve_shock_state(sys, v_minus, family, sk, guess);
        if (!sys.in_ball(v)) raise(Errc::LeftBall, "shock curve left the ball");
        const EigenDecomp hat = sys.hat_eigen(v, v_minus);
        knots.push_back({sk, {v, hat.values[family]}});
        tangent = hat.right[family];
        s_prev = sk;
    }
    return knots;
}

ShockPoint shock_curve(const SystemDef& sys, const Vec& v_minus, int family, double s) {
    return shock_curve_path(sys, v_minus, family, s).back().second;
}

double rh_residual(const SystemDef& sys, const Vec& v_minus, const Vec& v_plus, double xi) {
    return (sys.flux(v_plus) - sys.flux(v_minus) - xi * (v_plus - v_minus)).norm();
}

Wave contact_wave(const SystemDef& sys, const Vec& v_minus, int family, double s) {
    if (sys.field(family).kind != FieldKind::LinearlyDegenerate)
        raise(Errc::NotLD, "contact waves require a linearly degenerate family");

    Wave w;
    w.family = family;
    w.kind = WaveKind::Contact;
    w.v_minus = v_minus;
    w.v_plus = simple_wave_curve(sys, v_minus, family, s);
    w.strength = s;
    const double xi = sys.eigenvalue(v_minus, family);
    w.speed_lo = w.speed_hi = xi;

    const Tolerances& tol = sys.tol();
    if (rh_residual(sys, w.v_minus, w.v_plus, xi) > tol.rh_tol)
        raise(Errc::NotAJump, "contact construction violates Rankine-Hugoniot");
    if (std::fabs(sys.eigenvalue(w.v_plus, family) - xi) > tol.contact_speed_tol)
        raise(Errc::NotAJump, "characteristic speed drifts along the contact curve");
    return w;
}

double entropy_dissipation(const SystemDef& sys, const Vec& v_minus, const Vec& v_plus, double xi) {
    if (rh_residual(sys, v_minus, v_plus, xi) > sys.tol().rh_loose)
        raise(Errc::NotAJump, "states do not satisfy Rankine-Hugoniot");
    return (sys.entropy_flux(v_plus) - sys.entropy_flux(v_minus)) -
           xi * (sys.entropy(v_plus) - sys.entropy(v_minus));
}

LaxReport lax_check(const SystemDef& sys, const Wave& wave, LaxDirection direction, double delta_l) {
    LaxReport rep;
    rep.direction = direction;
    rep.jump_size = wave.jump().norm();
    const double xi = wave.speed_lo;
    const double lam_minus = sys.eigenvalue(wave.v_minus, wave.family);
    const double lam_plus = sys.eigenvalue(wave.v_plus, wave.family);
    const double offset = delta_l * rep.jump_size;

    double slack_minus, slack_plus;
    if (direction == LaxDirection::Forward) {
        slack_minus = (lam_minus - offset) - xi;
        slack_plus = xi - (lam_plus + offset);
    } else {
        slack_minus = xi - (lam_minus + offset);
        slack_plus = (lam_plus - offset) - xi;
    }
    rep.margin = std::min(slack_minus, slack_plus);
    rep.satisfied = rep.margin >= 0.0;
    return rep;
}

double calibrate_delta_l(const SystemDef& sys) {
    double min_slope = 1e300;
    bool any_gnl = false;
    for (const FieldInfo& f : sys.fields()) {
        if (f.kind != FieldKind::GenuinelyNonlinear) continue;
        any_gnl = true;
        min_slope = std::min(min_slope, f.gnl_min);
    }
    if (!any_gnl) return 0.0;

    double delta_l = 0.25 * (0.5 * min_slope);
    const double eps = sys.ball_radius();
    const Tolerances& tol = sys.tol();

    for (int round = 0;; ++round) {
        bool ok = true;
        for (const FieldInfo& f : sys.fields()) {
            if (f.kind != FieldKind::GenuinelyNonlinear) continue;
            for (double mag : {eps / 16.0, eps / 8.0, eps / 4.0}) {
                for (double side : {-1.0, 1.0}) {
                    Wave w;
                    try {
                        w = make_shock_wave(sys, sys.background(), f.family, side * mag);
                    } catch (const Error&) {
                        continue; // curve truncated by the ball edge; nothing to verify
                    }
                    // the admissible orientation for this side
                    const LaxDirection dir =
                        side < 0.0 ? LaxDirection::Forward : LaxDirection::Backward;
                    if (!lax_check(sys, w, dir, delta_l).satisfied) ok = false;
                }
            }
        }
        if (ok) return delta_l;
        if (round >= tol.max_delta_l_halvings)
            raise(Errc::ToleranceNotMet, "uniform Lax margin calibration failed");
        delta_l *= 0.5;
    }
}

Wave make_shock_wave(const SystemDef& sys, const Vec& v_minus, int family, double s) {
    if (sys.field(family).kind != FieldKind::GenuinelyNonlinear)
        raise(Errc::NotGNL, "shock waves require a genuinely nonlinear family");
    const ShockPoint p = shock_curve(sys, v_minus, family, s);
    Wave w;
    w.family = family;
    w.kind = WaveKind::Shock;
    w.v_minus = v_minus;
    w.v_plus = p.v_plus;
    w.strength = s;
    w.speed_lo = w.speed_hi = p.xi;
    if (rh_residual(sys, w.v_minus, w.v_plus, w.speed_lo) > sys.tol().rh_tol)
        raise(Errc::NotAJump, "shock construction violates Rankine-Hugoniot");
    return w;
}

Wave make_fan_wave(const SystemDef& sys, const Vec& v_minus, int family, double s) {
    if (sys.field(family).kind != FieldKind::GenuinelyNonlinear)
        raise(Errc::NotGNL, "simple waves require a genuinely nonlinear family");
    if (s < 0.0) throw std::invalid_argument("fan strength must be non-negative");
    Wave w;
    w.family = family;
    w.kind = WaveKind::SimpleWave;
    w.v_minus = v_minus;
    w.v_plus = simple_wave_curve(sys, v_minus, family, s);
    w.strength = s;
    w.speed_lo = sys.eigenvalue(w.v_minus, family);
    w.speed_hi = sys.eigenvalue(w.v_plus, family);
    return w;
}

} // namespace selfsim
