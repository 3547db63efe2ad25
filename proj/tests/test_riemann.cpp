#include <doctest.h>

#include <cmath>

#include "selfsim/errors.hpp"
#include "selfsim/riemann.hpp"
#include "selfsim/rng.hpp"
#include "support/fixtures.hpp"

using namespace selfsim;
using selfsim::testing::euler_system;
using selfsim::testing::p_system;

TEST_SUITE_BEGIN("riemann");

namespace {

SystemPtr shared_euler() {
    static SystemPtr sys = euler_system(2.0, 0.02);
    return sys;
}

} // namespace

TEST_CASE("equal data gives the constant profile") {
    const SystemPtr sys = shared_euler();
    const RiemannSolution sol = solve_riemann(sys, sys->background(), sys->background());
    CHECK(sol.strengths.norm() < 1e-12);
    CHECK(sol.profile.is_constant());
}

TEST_CASE("single-wave data is recovered exactly") {
    const SystemPtr sys = shared_euler();
    const Vec vbar = sys->background();
    const double eps = sys->ball_radius();

    // admissible-side shock on the fast family
    {
        const Wave w = make_shock_wave(*sys, vbar, 2, -eps / 8);
        const RiemannSolution sol = solve_riemann(sys, vbar, w.v_plus);
        CHECK(std::fabs(sol.strengths[2] + eps / 8) < 1e-8);
        CHECK(std::fabs(sol.strengths[0]) < 1e-10);
        CHECK(std::fabs(sol.strengths[1]) < 1e-10);
        CHECK(sol.profile.jumps().size() == 1);
    }

    // contact on the degenerate family
    {
        const Wave w = contact_wave(*sys, vbar, 1, eps / 8);
        const RiemannSolution sol = solve_riemann(sys, vbar, w.v_plus);
        CHECK(std::fabs(sol.strengths[1] - eps / 8) < 1e-8);
        CHECK(sol.profile.jumps().size() == 1);
        CHECK(sol.profile.jumps()[0].kind == WaveKind::Contact);
    }

    // fan on the slow family
    {
        const Vec end = simple_wave_curve(*sys, vbar, 0, eps / 8);
        const RiemannSolution sol = solve_riemann(sys, vbar, end);
        CHECK(std::fabs(sol.strengths[0] - eps / 8) < 1e-8);
        CHECK(sol.profile.jumps().empty());
    }
}

TEST_CASE("random small-data strengths are recovered and ordered") {
    const SystemPtr sys = shared_euler();
    const Vec vbar = sys->background();
    const double eps = sys->ball_radius();

    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        Vec s(3);
        for (int a = 0; a < 3; ++a) s[a] = rng.uniform(-eps / 8, eps / 8);
        const Composition data = compose_waves(sys, vbar, s);

        const RiemannSolution sol = solve_riemann(sys, vbar, data.v_right);
        CHECK((sol.strengths - s).norm_inf() < 1e-8);
        CHECK(sol.iterations <= 8);

        // wave speeds separate across families
        double prev = -1e300;
        for (const Wave& w : sol.profile.jumps().empty() && sol.profile.is_constant()
                                 ? std::vector<Wave>{}
                                 : data.waves) {
            if (std::fabs(w.strength) < 1e-12) continue;
            CHECK(w.speed_lo > prev);
            prev = w.speed_hi;
        }
    }
}

TEST_CASE("data outside the quarter ball is rejected") {
    const SystemPtr sys = shared_euler();
    const Vec vbar = sys->background();
    Vec far = vbar;
    far[0] += 0.9 * sys->ball_radius();
    CHECK_THROWS_AS((void)solve_riemann(sys, vbar, far), Error);
}

TEST_CASE("steady wrapper: expansion between the two states produces one fan") {
    const SystemPtr sys = shared_euler();
    const double eps = sys->ball_radius();
    const EulerState lower = EulerState::from_vec(sys->u_background());

    // upper state reached from the background through a small expansion of
    // the fast family
    const Vec v_up = simple_wave_curve(*sys, sys->background(), 2, eps / 8);
    const EulerState upper = EulerState::from_vec(sys->from_V(v_up));

    const RiemannSolution sol = steady_riemann_2d(sys, upper, lower, Halfplane::XPos);
    CHECK(sol.profile.jumps().empty());
    CHECK(std::fabs(sol.strengths[2] - eps / 8) < 1e-8);
    int fans = 0;
    for (const Piece& p : sol.profile.pieces())
        if (p.type == PieceType::Fan) ++fans;
    CHECK(fans == 1);
}

TEST_CASE("steady wrapper: slip states produce a single contact") {
    const SystemPtr sys = shared_euler();
    const double eps = sys->ball_radius();
    const EulerState lower = EulerState::from_vec(sys->u_background());
    const Vec v_up = simple_wave_curve(*sys, sys->background(), 1, eps / 8);
    const EulerState upper = EulerState::from_vec(sys->from_V(v_up));

    const RiemannSolution sol = steady_riemann_2d(sys, upper, lower, Halfplane::XPos);
    REQUIRE(sol.profile.jumps().size() == 1);
    CHECK(sol.profile.jumps()[0].kind == WaveKind::Contact);
    CHECK(sol.profile.jumps()[0].family == 1);
    // the contact sits on the (1 : 0) ray for a horizontal background
    CHECK(std::fabs(sol.profile.breakpoints()[0]) < 0.05);
}

TEST_CASE("steady wrapper: equal states give the constant profile") {
    const SystemPtr sys = shared_euler();
    const EulerState u = EulerState::from_vec(sys->u_background());
    const RiemannSolution sol = steady_riemann_2d(sys, u, u, Halfplane::XPos);
    CHECK(sol.profile.is_constant());
    CHECK(sol.strengths.norm() < 1e-12);
}

TEST_CASE("backward halfplane requests are refused") {
    const SystemPtr sys = shared_euler();
    const EulerState u = EulerState::from_vec(sys->u_background());
    CHECK_THROWS_AS((void)steady_riemann_2d(sys, u, u, Halfplane::XNeg), std::invalid_argument);
}

TEST_CASE("p-system Riemann problems solve the same way") {
    const SystemPtr sys = p_system();
    const Vec vbar = sys->background();
    const double eps = sys->ball_radius();

    Rng rng(55);
    for (int trial = 0; trial < 8; ++trial) {
        Vec s{rng.uniform(-eps / 8, eps / 8), rng.uniform(-eps / 8, eps / 8)};
        const Vec target = compose_waves(sys, vbar, s).v_right;
        const RiemannSolution sol = solve_riemann(sys, vbar, target);
        CHECK((sol.strengths - s).norm_inf() < 1e-8);
    }
}

TEST_SUITE_END();
