#pragma once

#include "selfsim/euler.hpp"
#include "selfsim/profile.hpp"
#include "selfsim/system.hpp"
#include "selfsim/waves.hpp"

namespace selfsim {

/// Composition of one wave per family (ascending family order) applied to a
/// left state.  For genuinely nonlinear families the admissible forward
/// convention is used: s >= 0 yields a fan, s < 0 a shock; linearly
/// degenerate families yield contacts for either sign.
struct Composition {
    Vec v_right;
    std::vector<Wave> waves;          // one per family, zero-strength included
    std::vector<Vec> middle_states;   // m+1 states, left to right
};

Composition compose_waves(SystemPtr sys, const Vec& v_left, const Vec& strengths);

struct RiemannSolution {
    Vec strengths;
    Profile profile;
    int iterations = 0;
};

/// Forward self-similar solution of the Riemann problem V_L -> V_R: Newton
/// iteration on the wave strengths, assembled into a right-continuous
/// profile with strictly ordered wave speeds.  Data must lie within a
/// quarter of the ball radius of the background so the intermediate states
/// stay inside; throws NoConvergence / OutOfBall.
RiemannSolution solve_riemann(SystemPtr sys, const Vec& v_left, const Vec& v_right,
                              Halfplane halfplane = Halfplane::XPos);

/// Steady two-dimensional wrapper for Euler: converts the two states to
/// V-coordinates and solves over xi = y/x.  Only halfplanes in which every
/// family is forward are supported (backward problems are non-unique by
/// design and served by the fixture generator instead).
RiemannSolution steady_riemann_2d(SystemPtr sys, const EulerState& u_upper,
                                  const EulerState& u_lower, Halfplane halfplane);

} // namespace selfsim
