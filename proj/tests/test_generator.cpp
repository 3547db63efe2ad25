#include <doctest.h>

#include <cmath>

#include "selfsim/errors.hpp"
#include "selfsim/generator.hpp"
#include "selfsim/riemann.hpp"
#include "selfsim/verifier.hpp"
#include "support/fixtures.hpp"

using namespace selfsim;
using selfsim::testing::euler_system;

TEST_SUITE_BEGIN("generator");

namespace {

SystemPtr shared_euler() {
    static SystemPtr sys = euler_system(2.0, 0.02);
    return sys;
}

const SectorLayout& shared_layout() {
    static SectorLayout layout = sector_layout(*shared_euler());
    return layout;
}

} // namespace

TEST_CASE("forward generator: single waves that verify, incompatible kinds rejected") {
    const SystemPtr sys = shared_euler();
    const SectorLayout& layout = shared_layout();
    const double eps = sys->ball_radius();

    const Profile zero = generate_forward(sys, layout, 2, WaveKind::Shock, 0.0);
    CHECK(zero.is_constant());

    for (int fam : {0, 2}) {
        const Profile shock = generate_forward(sys, layout, fam, WaveKind::Shock, -eps / 8);
        CHECK(verify_profile(layout, shock, 96).pass);
    }
    const Profile fan = generate_forward(sys, layout, 2, WaveKind::SimpleWave, eps / 8);
    CHECK(verify_profile(layout, fan, 96).pass);
    CHECK(std::fabs(total_variation(fan) - eps / 8) < 1e-6);

    const Profile contact = generate_forward(sys, layout, 1, WaveKind::Contact, eps / 8);
    CHECK(verify_profile(layout, contact, 96).pass);

    // kind/family mismatches and the inadmissible side are refused
    CHECK_THROWS_AS((void)generate_forward(sys, layout, 1, WaveKind::Shock, -eps / 8), Error);
    CHECK_THROWS_AS((void)generate_forward(sys, layout, 2, WaveKind::Contact, eps / 8), Error);
    CHECK_THROWS_AS((void)generate_forward(sys, layout, 2, WaveKind::Shock, +eps / 8), Error);
    CHECK_THROWS_AS((void)generate_forward(sys, layout, 2, WaveKind::SimpleWave, -eps / 8), Error);
}

TEST_CASE("backward generator: one shock mirrors the forward construction") {
    const SystemPtr sys = shared_euler();
    const SectorLayout& layout = shared_layout();
    const double eps = sys->ball_radius();

    const Profile back = generate_backward_shocks(sys, layout, 2, 1, eps / 8);
    CHECK(back.halfplane() == Halfplane::XNeg);
    REQUIRE(back.jumps().size() == 1);

    const Jump& j = back.jumps()[0];
    // the jump endpoint is the admissible-side mirror: characteristic speed
    // rises across it
    CHECK(sys->eigenvalue(j.v_plus, 2) > sys->eigenvalue(j.v_minus, 2));
    CHECK(verify_profile(layout, back, 96).pass);
}

TEST_CASE("backward generator: shock trains fit the sector accounting") {
    const SystemPtr sys = shared_euler();
    const SectorLayout& layout = shared_layout();
    const Sector& sector = layout.sectors[2];
    const double eps = sys->ball_radius();

    const Profile p = generate_backward_shocks(sys, layout, 2, 20, eps / 200.0);
    CHECK(p.jumps().size() == 20);
    CHECK(verify_profile(layout, p, 96).pass);

    // neighbourhood accounting: the sum of recorded neighbourhood lengths
    // stays inside the sector width
    double sum = 0.0;
    for (const Jump& j : p.jumps())
        sum += sys->eigenvalue(j.v_plus, 2) - sys->eigenvalue(j.v_minus, 2);
    CHECK(sum <= 2.0 * sector.half_width);

    // saltus bound per family
    const SaltusDecomposition dec = saltus_decompose(p);
    CHECK(dec.family_jump_sum(2) <= (2.0 * sector.half_width) / (2.0 * layout.delta_l));
}

TEST_CASE("backward generator: bounds are uniform as the train is refined") {
    const SystemPtr sys = shared_euler();
    const SectorLayout& layout = shared_layout();
    const double eps = sys->ball_radius();
    const double total = eps / 10.0;

    double lip20 = -1.0, sum20 = -1.0;
    for (int n : {20, 40}) {
        std::vector<BackwardItem> items;
        for (int i = 0; i < n; ++i) {
            items.push_back(BackwardShock{total / n});
            if (i + 1 < n) items.push_back(BackwardCompression{0.5 * total / n});
        }
        const Profile p = generate_backward(sys, layout, 2, items);
        const SaltusDecomposition dec = saltus_decompose(p);
        const double sum = dec.sum_jump_magnitudes();
        const double lip = dec.lipschitz_estimate();
        CHECK(sum <= (2.0 * layout.sectors[2].half_width) / (2.0 * layout.delta_l));
        if (lip20 > 0.0) {
            CHECK(std::fabs(sum - sum20) < 0.1 * sum20);
            CHECK(std::fabs(lip - lip20) < 0.1 * lip20);
        }
        sum20 = sum;
        lip20 = lip;
    }
}

TEST_CASE("geometric accumulation: jumps summable, partial sums Cauchy, limit resonant") {
    const SystemPtr sys = shared_euler();
    const SectorLayout& layout = shared_layout();
    const double eps = sys->ball_radius();

    std::vector<BackwardItem> items;
    for (int i = 1; i <= 50; ++i) items.push_back(BackwardShock{(eps / 8) * std::pow(2.0, -i)});
    const Profile p = generate_backward(sys, layout, 2, items);
    CHECK(verify_profile(layout, p, 96).pass);
    // representable jumps only: strengths below the breakpoint resolution
    // are dropped, but everything that remains is genuinely ordered
    CHECK(p.jumps().size() >= 20);

    // partial sums of V_S converge: the last ten recorded jumps together
    // contribute less than the Cauchy threshold
    const SaltusDecomposition dec = saltus_decompose(p);
    REQUIRE(dec.jumps().size() > 10);
    double tail = 0.0;
    for (std::size_t i = dec.jumps().size() - 10; i < dec.jumps().size(); ++i)
        tail += dec.jumps()[i].delta.norm();
    CHECK(tail < 1e-10);

    // the accumulation point is (numerically) a resonance point
    const Jump& last = p.jumps().back();
    const double xi_last = p.breakpoints()[static_cast<std::size_t>(last.break_index)];
    CHECK(std::fabs(sys->eigenvalue(last.v_plus, 2) - xi_last) < 1e-6);
}

TEST_CASE("backward generator rejections") {
    const SystemPtr sys = shared_euler();
    const SectorLayout& layout = shared_layout();
    const double eps = sys->ball_radius();

    // consecutive compressions
    std::vector<BackwardItem> bad{BackwardShock{eps / 32}, BackwardCompression{eps / 64},
                                  BackwardCompression{eps / 64}};
    CHECK_THROWS_AS((void)generate_backward(sys, layout, 2, bad), Error);
    try {
        (void)generate_backward(sys, layout, 2, bad);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ConsecutiveSimpleWaves);
    }

    // programs too large for the sector
    std::vector<BackwardItem> huge(64, BackwardShock{eps / 16});
    try {
        (void)generate_backward(sys, layout, 2, huge);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DoesNotFit);
    }

    // degenerate family cannot host a backward program
    CHECK_THROWS_AS((void)generate_backward(sys, layout, 1, {BackwardShock{eps / 32}}), Error);
}

TEST_CASE("mutations are deterministic and reject inapplicable targets") {
    const SystemPtr sys = shared_euler();
    const SectorLayout& layout = shared_layout();
    const Profile constant = solve_riemann(sys, sys->background(), sys->background()).profile;

    CHECK_THROWS_AS((void)mutate(constant, Mutation::SpeedShift), Error);
    try {
        (void)mutate(constant, Mutation::SpeedShift);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InapplicableMutation);
    }
    CHECK_THROWS_AS((void)mutate(constant, Mutation::AdjacentFans), Error);

    const Profile shock =
        generate_forward(sys, layout, 2, WaveKind::Shock, -sys->ball_radius() / 8);
    const Profile m1 = mutate(shock, Mutation::SideFlip);
    const Profile m2 = mutate(shock, Mutation::SideFlip);
    CHECK(m1.breakpoints() == m2.breakpoints());
    CHECK((m1.jumps()[0].v_plus - m2.jumps()[0].v_plus).norm() == 0.0);
}

TEST_SUITE_END();
