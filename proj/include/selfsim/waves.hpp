#pragma once

#include <functional>
#include <vector>

#include "selfsim/system.hpp"

namespace selfsim {

enum class WaveKind { Shock, SimpleWave, Contact };

const char* wave_kind_name(WaveKind k);

/// One elementary wave.  For shocks and contacts speed_lo == speed_hi is the
/// jump location; for simple waves [speed_lo, speed_hi] is the fan range.
struct Wave {
    int family = 0; // 0-based
    WaveKind kind = WaveKind::Shock;
    Vec v_minus, v_plus;
    double strength = 0.0;
    double speed_lo = 0.0;
    double speed_hi = 0.0;

    Vec jump() const { return v_plus - v_minus; }
};

enum class LaxDirection { Forward, Backward };

/// Margin report for the uniform Lax inequalities with slope delta_L:
/// forward:  lambda(V-) - dL |[V]|  >=  xi  >=  lambda(V+) + dL |[V]|;
/// backward: both inequalities reversed.
struct LaxReport {
    bool satisfied = false;
    double margin = 0.0; // min slack of the two inequalities (negative if violated)
    LaxDirection direction = LaxDirection::Forward;
    double jump_size = 0.0;
};

/// Point on the simple-wave curve: integrates R_s = r^a(R) from v_minus.
/// Throws LeftBall when the curve exits the ball before reaching s.
Vec simple_wave_curve(const SystemDef& sys, const Vec& v_minus, int family, double s);

/// Full sampled curve (used by fans and tabulation).
OdePath simple_wave_path(const SystemDef& sys, const Vec& v_minus, int family, double s);

/// xi-parametrized fan of a genuinely nonlinear family: the inverse of the
/// strictly increasing map s -> lambda^a(R^a(V-, s)) on [0, s].
class WaveFan {
public:
    WaveFan(SystemPtr sys, Vec v_minus, int family, double strength);

    double xi_lo() const { return xi_lo_; }
    double xi_hi() const { return xi_hi_; }
    const Vec& v_minus() const { return path_.y.front(); }
    const Vec& v_plus() const { return path_.y.back(); }
    double strength() const { return strength_; }
    int family() const { return family_; }

    /// State at xi (clamped to the fan range at the edges).
    Vec at(double xi) const;
    /// Curve parameter s(xi).
    double param_at(double xi) const;

private:
    SystemPtr sys_;
    int family_;
    double strength_;
    double xi_lo_, xi_hi_;
    OdePath path_;                // dense samples of R^a(V-, .)
    std::vector<double> lambda_;  // lambda along the samples (strictly increasing)
};

WaveFan wave_fan(SystemPtr sys, const Vec& v_minus, int family, double s);

struct ShockPoint {
    Vec v_plus;
    double xi = 0.0; // Hugoniot speed = hat-lambda^a(V+, V-)
};

/// Point on the shock curve: continuation from s = 0 of
/// V+ - V- - s rhat^a(V+, V-) = 0 with xi the matching averaged-Jacobian
/// eigenvalue.  Throws LeftBall / NoConvergence.
ShockPoint shock_curve(const SystemDef& sys, const Vec& v_minus, int family, double s);

/// All continuation knots up to s (ascending |s|), including s = 0.
std::vector<std::pair<double, ShockPoint>> shock_curve_path(const SystemDef& sys, const Vec& v_minus,
                                                            int family, double s);

/// Contact discontinuity of a linearly degenerate family: the jump endpoint
/// lies on the simple-wave curve and travels at the shared characteristic
/// speed.  Throws NotLD for genuinely nonlinear families.
Wave contact_wave(const SystemDef& sys, const Vec& v_minus, int family, double s);

/// E = [q] - xi [e] for a jump that satisfies Rankine-Hugoniot to rh_loose;
/// negative values mean dissipation.  Throws NotAJump otherwise.
double entropy_dissipation(const SystemDef& sys, const Vec& v_minus, const Vec& v_plus, double xi);

/// Rankine-Hugoniot residual |f(V+) - f(V-) - xi (V+ - V-)|.
double rh_residual(const SystemDef& sys, const Vec& v_minus, const Vec& v_plus, double xi);

LaxReport lax_check(const SystemDef& sys, const Wave& wave, LaxDirection direction, double delta_l);

/// Conservative uniform Lax slope: one quarter of the smallest sampled
/// half-slope (lambda_V . r)/2 over the genuinely nonlinear families, halved
/// further (up to tol.max_delta_l_halvings times) until sample shocks on the
/// admissible side of every GNL family pass their margin check.
double calibrate_delta_l(const SystemDef& sys);

/// Convenience constructors that validate the wave invariants.
Wave make_shock_wave(const SystemDef& sys, const Vec& v_minus, int family, double s);
Wave make_fan_wave(const SystemDef& sys, const Vec& v_minus, int family, double s);

} // namespace selfsim
