#pragma once

// Shared test fixtures: the reference Euler instance and a 2x2 p-system
// (both genuinely nonlinear fields) used to exercise the generic machinery.

#include <cmath>

#include "selfsim/euler.hpp"
#include "selfsim/system.hpp"

namespace selfsim::testing {

inline Tolerances quiet_tolerances() {
    Tolerances t; // defaults; independent of the environment
    return t;
}

inline SystemPtr euler_system(double mach = 2.0, double eps = 0.01, double gamma = 1.4) {
    const PressureLaw law = PressureLaw::gamma_law(gamma);
    return make_euler_system(law, EulerState{1.0, mach, 0.0}, eps, quiet_tolerances());
}

/// p-system in Lagrangian form, embedded as a steady planar system with the
/// identity x-flux (x plays the role of time): U = (v, u),
/// f(U) = (-u, p(v)) with p(v) = v^-gamma.  Both fields genuinely nonlinear.
inline SystemPtr p_system(double gamma = 2.0, double eps = 0.05) {
    RawSystem raw;
    raw.dim = 2;
    raw.flux_x = [](const Vec& u) { return u; };
    raw.flux_x_jac = [](const Vec& u) { return Mat::identity(u.dim()); };
    raw.flux_y = [gamma](const Vec& u) { return Vec{-u[1], std::pow(u[0], -gamma)}; };
    raw.flux_y_jac = [gamma](const Vec& u) {
        Mat j(2);
        j(0, 0) = 0.0;
        j(0, 1) = -1.0;
        j(1, 0) = -gamma * std::pow(u[0], -gamma - 1.0);
        j(1, 1) = 0.0;
        return j;
    };
    // eta = u^2/2 + v^(1-gamma)/(gamma-1),  psi = u p(v); the x-entropy-flux
    // equals eta because the x-flux is the identity.
    raw.entropy = [gamma](const Vec& u) {
        return 0.5 * u[1] * u[1] + std::pow(u[0], 1.0 - gamma) / (gamma - 1.0);
    };
    raw.entropy_flux_x = raw.entropy;
    raw.entropy_flux_y = [gamma](const Vec& u) { return u[1] * std::pow(u[0], -gamma); };
    raw.background = Vec{1.0, 0.0};
    raw.ball_radius = eps;
    return make_system(std::move(raw), quiet_tolerances());
}

} // namespace selfsim::testing
