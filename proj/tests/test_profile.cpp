#include <doctest.h>

#include <cmath>

#include "selfsim/errors.hpp"
#include "selfsim/generator.hpp"
#include "selfsim/profile.hpp"
#include "selfsim/riemann.hpp"
#include "selfsim/rng.hpp"
#include "support/fixtures.hpp"

using namespace selfsim;
using selfsim::testing::euler_system;

TEST_SUITE_BEGIN("profile");

namespace {

SystemPtr shared_euler() {
    static SystemPtr sys = euler_system(2.0, 0.02);
    return sys;
}

const SectorLayout& shared_layout() {
    static SectorLayout layout = sector_layout(*shared_euler());
    return layout;
}

Profile single_shock_profile(double strength_scale = 1.0) {
    const SystemPtr sys = shared_euler();
    return generate_forward(sys, shared_layout(), 2, WaveKind::Shock,
                            -strength_scale * sys->ball_radius() / 8.0);
}

} // namespace

TEST_CASE("sector layout: centers, disjointness, shrink monotonicity") {
    const SystemPtr sys = shared_euler();
    const SectorLayout& layout = shared_layout();

    REQUIRE(layout.sectors.size() == 3);
    const double lam = 1.0 / std::sqrt(3.0);
    CHECK(std::fabs(layout.sectors[0].center + lam) < 1e-10);
    CHECK(std::fabs(layout.sectors[1].center) < 1e-14);
    CHECK(std::fabs(layout.sectors[2].center - lam) < 1e-10);

    for (int a = 0; a + 1 < 3; ++a)
        CHECK(layout.sectors[a].hi() < layout.sectors[a + 1].lo()); // strictly disjoint

    CHECK(layout.sector_of(layout.sectors[1].center) == 1);
    CHECK(layout.sector_of(0.3) == -1);

    // halving the ball radius shrinks every half-width
    const SystemPtr half = euler_system(2.0, 0.01);
    const SectorLayout small = sector_layout(*half);
    for (int a = 0; a < 3; ++a)
        CHECK(small.sectors[a].half_width < layout.sectors[a].half_width);
}

TEST_CASE("evaluation is right-continuous with exact left limits") {
    const Profile p = single_shock_profile();
    REQUIRE(p.jumps().size() == 1);
    const Jump& j = p.jumps()[0];
    const double xi = p.breakpoints()[0];

    CHECK((p.evaluate(xi) - j.v_plus).norm() == 0.0);
    CHECK((p.left_limit(xi) - j.v_minus).norm() == 0.0);
    CHECK((p.evaluate(xi - 1e-12) - j.v_minus).norm() == 0.0);
    CHECK((p.evaluate(xi + 1.0) - j.v_plus).norm() == 0.0);
    CHECK((p.evaluate(xi - 1.0) - j.v_minus).norm() == 0.0);

    // constant profile evaluates identically everywhere
    const SystemPtr sys = shared_euler();
    const Profile c = solve_riemann(sys, sys->background(), sys->background()).profile;
    CHECK((c.evaluate(-5.0) - c.evaluate(7.0)).norm() == 0.0);
}

TEST_CASE("fan pieces delegate to the wave fan") {
    const SystemPtr sys = shared_euler();
    const double eps = sys->ball_radius();
    const Profile p = generate_forward(sys, shared_layout(), 2, WaveKind::SimpleWave, eps / 8);

    const WaveFan fan = wave_fan(sys, sys->background(), 2, eps / 8);
    for (int k = 0; k <= 16; ++k) {
        const double xi = fan.xi_lo() + (fan.xi_hi() - fan.xi_lo()) * k / 16.0;
        CHECK((p.evaluate(xi) - fan.at(xi)).norm() < 1e-10);
    }
}

TEST_CASE("saltus split: single jump and pure fan") {
    const SystemPtr sys = shared_euler();
    const double eps = sys->ball_radius();

    // a single jump splits into a step plus a constant remainder
    {
        const Profile p = single_shock_profile();
        const SaltusDecomposition dec = saltus_decompose(p);
        REQUIRE(dec.jumps().size() == 1);
        const double xi = p.breakpoints()[0];
        CHECK(dec.v_s(xi - 1e-9).norm() == 0.0);
        CHECK((dec.v_s(xi + 1e-9) - p.jumps()[0].delta()).norm() == 0.0);
        CHECK((dec.v_s(xi) - p.jumps()[0].delta()).norm() == 0.0); // right-continuous

        // V_L is globally constant for a pure-jump profile
        CHECK(dec.lipschitz_estimate() < 1e-9);
        Rng rng(8);
        for (int k = 0; k < 32; ++k) {
            const double a = rng.uniform(xi - 1.0, xi + 1.0);
            CHECK((dec.v_l(a) - dec.v_l(xi - 0.5)).norm() < 1e-12);
        }
    }

    // a pure fan has no jump part at all
    {
        const Profile p = generate_forward(sys, shared_layout(), 2, WaveKind::SimpleWave, eps / 8);
        const SaltusDecomposition dec = saltus_decompose(p);
        CHECK(dec.jumps().empty());
        CHECK(dec.sum_jump_magnitudes() == 0.0);
        Rng rng(9);
        for (int k = 0; k < 32; ++k) {
            const double a = rng.uniform(p.breakpoints().front() - 0.1, p.breakpoints().back() + 0.1);
            CHECK((dec.v_l(a) - p.evaluate(a)).norm() == 0.0);
        }
    }
}

TEST_CASE("saltus reconstruction is exact at random points") {
    const SystemPtr sys = shared_euler();
    const SectorLayout& layout = shared_layout();
    const Profile p = generate_backward_shocks(sys, layout, 2, 6, sys->ball_radius() / 64.0);
    const SaltusDecomposition dec = saltus_decompose(p);

    Rng rng(31337);
    const auto [lo, hi] = p.support();
    for (int k = 0; k < 10000; ++k) {
        const double xi = rng.uniform(lo - 0.2, hi + 0.2);
        const Vec recon = dec.v_s(xi) + dec.v_l(xi);
        CHECK((recon - p.evaluate(xi)).norm() == 0.0);
    }
}

TEST_CASE("total variation: constants, jumps, fans, additivity") {
    const SystemPtr sys = shared_euler();
    const double eps = sys->ball_radius();

    const Profile constant = solve_riemann(sys, sys->background(), sys->background()).profile;
    CHECK(total_variation(constant, -1.0, 1.0) == 0.0);

    const Profile shock = single_shock_profile();
    CHECK(std::fabs(total_variation(shock) - shock.jumps()[0].delta().norm()) < 1e-12);

    // unit-speed parametrization: a fan's variation equals its strength
    const Profile fan = generate_forward(sys, shared_layout(), 2, WaveKind::SimpleWave, eps / 8);
    CHECK(std::fabs(total_variation(fan) - eps / 8) < 1e-6);

    // additivity over disjoint intervals
    const auto [lo, hi] = fan.support();
    const double mid = 0.5 * (lo + hi);
    const double split = total_variation(fan, lo - 0.5, mid) + total_variation(fan, mid, hi + 0.5);
    CHECK(std::fabs(split - total_variation(fan, lo - 0.5, hi + 0.5)) < 1e-9);
}

TEST_CASE("profile integrals: exact on constants, accurate through jumps") {
    const Profile p = single_shock_profile();
    const double xi = p.breakpoints()[0];
    const Vec vm = p.jumps()[0].v_minus;
    const Vec vp = p.jumps()[0].v_plus;

    const Vec left = profile_integral(p, xi - 0.5, xi);
    CHECK((left - 0.5 * vm).norm() < 1e-14);
    const Vec both = profile_integral(p, xi - 0.5, xi + 0.25);
    CHECK((both - (0.5 * vm + 0.25 * vp)).norm() < 1e-14);

    // orientation flip
    CHECK((profile_integral(p, xi + 0.25, xi - 0.5) + both).norm() < 1e-14);
}

TEST_CASE("builder validation rejects inconsistent assemblies") {
    const SystemPtr sys = shared_euler();
    const Vec vbar = sys->background();

    // a jump violating Rankine-Hugoniot is rejected
    {
        ProfileBuilder b(sys, Halfplane::XPos, vbar);
        Vec bad = vbar;
        bad[0] += 0.001;
        b.add_jump(0.5, 2, WaveKind::Shock, bad);
        CHECK_THROWS_AS((void)b.finish(), Error);
    }

    // out-of-ball constants are rejected
    {
        Vec far = vbar;
        far[0] += 10.0 * sys->ball_radius();
        ProfileBuilder b(sys, Halfplane::XPos, far);
        CHECK_THROWS_AS((void)b.finish(), Error);
    }

    // breakpoints must advance
    {
        const Wave w = make_shock_wave(*sys, vbar, 2, -sys->ball_radius() / 8);
        ProfileBuilder b(sys, Halfplane::XPos, vbar);
        b.add_jump(w.speed_lo, 2, WaveKind::Shock, w.v_plus);
        CHECK_THROWS_AS(b.add_jump(w.speed_lo - 0.1, 2, WaveKind::Shock, w.v_minus), Error);
    }
}

TEST_CASE("backward profiles record disjoint shock neighbourhoods inside the sector") {
    const SystemPtr sys = shared_euler();
    const SectorLayout& layout = shared_layout();
    const Sector& sector = layout.sectors[2];
    const Profile p = generate_backward_shocks(sys, layout, 2, 8, sys->ball_radius() / 80.0);

    // sigma-(xi_i) = lambda(left state), sigma+(xi_i) = lambda(right state):
    // the intervals must be pairwise disjoint and contained in the sector
    double prev_hi = sector.lo();
    for (const Jump& j : p.jumps()) {
        const double xi = p.breakpoints()[static_cast<std::size_t>(j.break_index)];
        const double lo = sys->eigenvalue(j.v_minus, 2);
        const double hi = sys->eigenvalue(j.v_plus, 2);
        CHECK(lo < xi);
        CHECK(xi < hi);
        CHECK(lo >= prev_hi - 1e-12);
        CHECK(hi <= sector.hi() + 1e-12);
        prev_hi = hi;
    }
}

TEST_SUITE_END();
