#include <doctest.h>

#include <cmath>

#include "selfsim/errors.hpp"
#include "selfsim/generator.hpp"
#include "selfsim/riemann.hpp"
#include "selfsim/rng.hpp"
#include "selfsim/verifier.hpp"
#include "support/fixtures.hpp"

using namespace selfsim;
using selfsim::testing::euler_system;

TEST_SUITE_BEGIN("verifier");

namespace {

SystemPtr shared_euler() {
    static SystemPtr sys = euler_system(2.0, 0.05);
    return sys;
}

const SectorLayout& shared_layout() {
    static SectorLayout layout = sector_layout(*shared_euler());
    return layout;
}

bool has_reason(const StructureReport& rep, const std::string& reason) {
    for (const SectorVerdict& v : rep.sectors)
        for (const std::string& r : v.reasons)
            if (r == reason) return true;
    for (const std::string& r : rep.global_reasons)
        if (r == reason) return true;
    return false;
}

} // namespace

TEST_CASE("weak residual: constants telescope, jumps stay tight") {
    const SystemPtr sys = shared_euler();
    const Profile constant = solve_riemann(sys, sys->background(), sys->background()).profile;
    CHECK(weak_residual(constant, 64).max_residual < 1e-12);

    const Profile shock =
        generate_forward(sys, shared_layout(), 2, WaveKind::Shock, -sys->ball_radius() / 8);
    CHECK(weak_residual(shock, 128).max_residual < 1e-9);
}

TEST_CASE("weak residual grows linearly with a speed perturbation") {
    const SystemPtr sys = shared_euler();
    const Profile shock =
        generate_forward(sys, shared_layout(), 2, WaveKind::Shock, -sys->ball_radius() / 8);
    const double jump = shock.jumps()[0].delta().norm();

    for (double delta : {1e-4, 1e-3, 1e-2}) {
        MutationParams params;
        params.magnitude = delta;
        const Profile bad = mutate(shock, Mutation::SpeedShift, params);
        const double res = weak_residual(bad, 128).max_residual;
        CHECK(res > 0.5 * delta * jump);
        CHECK(res < 2.0 * delta * jump);
    }
}

TEST_CASE("entropy residual: admissible shocks dissipate, the mirror orientation fails") {
    const SystemPtr sys = shared_euler();
    const Profile shock =
        generate_forward(sys, shared_layout(), 2, WaveKind::Shock, -sys->ball_radius() / 4);

    const EntropyReport fwd = entropy_residual(shock, 128);
    CHECK(fwd.satisfied);

    // pairs straddling the jump see the dissipation as strict slack
    const SystemDef& sd = *sys;
    const double xi = shock.breakpoints()[0];
    const Vec va = shock.evaluate(xi - 1e-4);
    const Vec vb = shock.evaluate(xi + 1e-4);
    const double bracket = (sd.entropy_flux(vb) - (xi + 1e-4) * sd.entropy(vb)) -
                           (sd.entropy_flux(va) - (xi - 1e-4) * sd.entropy(va));
    const double straddle = bracket + profile_entropy_integral(shock, xi - 1e-4, xi + 1e-4);
    CHECK(straddle < -1e-9); // ~ E of the shock

    // the same profile read as a backward-halfplane solution must fail
    const EntropyReport bwd = entropy_residual(shock, Halfplane::XNeg, 128, 1);
    CHECK(!bwd.satisfied);
    CHECK(bwd.worst_violation > 0.0);

    const Profile constant = solve_riemann(sys, sys->background(), sys->background()).profile;
    CHECK(std::fabs(entropy_residual(constant, 64).worst_violation) < 1e-12);
}

TEST_CASE("residual reports are stable under pair-density doubling") {
    const SystemPtr sys = shared_euler();
    const Profile shock =
        generate_forward(sys, shared_layout(), 2, WaveKind::Shock, -sys->ball_radius() / 8);
    MutationParams params;
    params.magnitude = 1e-3;
    const Profile bad = mutate(shock, Mutation::SpeedShift, params);

    const double r1 = weak_residual(bad, 128).max_residual;
    const double r2 = weak_residual(bad, 256).max_residual;
    CHECK(std::fabs(r1 - r2) < 0.1 * std::max(r1, r2));
}

TEST_CASE("residual sampling parallelizes without changing the report") {
    const SystemPtr sys = shared_euler();
    const Profile shock =
        generate_forward(sys, shared_layout(), 2, WaveKind::Shock, -sys->ball_radius() / 8);
    const ResidualReport serial = weak_residual(shock, 128, 1);
    const ResidualReport parallel = weak_residual(shock, 128, 4);
    CHECK(serial.max_residual == parallel.max_residual);
    CHECK(serial.worst_lo == parallel.worst_lo);
}

TEST_CASE("classifier passes solver output and the generator fixtures") {
    const SystemPtr sys = shared_euler();
    const SectorLayout& layout = shared_layout();
    const Vec vbar = sys->background();
    const double eps = sys->ball_radius();

    Rng rng(404);
    for (int trial = 0; trial < 6; ++trial) {
        Vec s(3);
        for (int a = 0; a < 3; ++a) s[a] = rng.uniform(-eps / 8, eps / 8);
        const Vec target = compose_waves(sys, vbar, s).v_right;
        const RiemannSolution sol = solve_riemann(sys, vbar, target);
        const VerifyReport rep = verify_profile(layout, sol.profile, 96);
        CHECK(rep.pass);
    }

    const Profile back = generate_backward_shocks(sys, layout, 2, 10, eps / 100.0);
    CHECK(verify_profile(layout, back, 96).pass);
}

TEST_CASE("classifier rejects two waves in a forward sector") {
    const SystemPtr sys = shared_euler();
    const Profile shock =
        generate_forward(sys, shared_layout(), 2, WaveKind::Shock, -sys->ball_radius() / 8);
    const Profile doubled = mutate(shock, Mutation::DuplicateForwardWave);
    const StructureReport rep = classify_structure(shared_layout(), doubled);
    CHECK(!rep.pass);
    CHECK(has_reason(rep, "MultipleForwardWaves"));
}

TEST_CASE("classifier demands proportional neighbourhoods around backward shocks") {
    const SystemPtr sys = shared_euler();
    const SectorLayout& layout = shared_layout();
    const Profile back = generate_backward_shocks(sys, layout, 2, 3, sys->ball_radius() / 32.0);
    CHECK(classify_structure(layout, back).pass);

    // pushing the middle shock against its neighbour shrinks the constant
    // piece below delta_L |[V]|
    const Jump& j1 = back.jumps()[1];
    const double gap = back.breakpoints()[static_cast<std::size_t>(back.jumps()[2].break_index)] -
                       back.breakpoints()[static_cast<std::size_t>(j1.break_index)];
    MutationParams params;
    params.jump_index = 1;
    params.magnitude = 0.995 * gap;
    const Profile bad = mutate(back, Mutation::SpeedShift, params);
    const StructureReport rep = classify_structure(layout, bad);
    CHECK(!rep.pass);
    CHECK(has_reason(rep, "NeighbourhoodTooSmall"));
}

TEST_CASE("mutation detection matrix: all five corruption classes are caught") {
    const SystemPtr sys = shared_euler();
    const SectorLayout& layout = shared_layout();
    const double eps = sys->ball_radius();
    const Profile shock = generate_forward(sys, layout, 2, WaveKind::Shock, -eps / 4);
    REQUIRE(verify_profile(layout, shock, 96).pass);

    // speed perturbation >= 1e-3
    {
        MutationParams p;
        p.magnitude = 1e-3;
        const VerifyReport rep = verify_profile(layout, mutate(shock, Mutation::SpeedShift, p), 96);
        CHECK(!rep.pass);
    }
    // inadmissible shock side
    {
        const VerifyReport rep = verify_profile(layout, mutate(shock, Mutation::SideFlip), 96);
        CHECK(!rep.pass);
        CHECK(!rep.entropy.satisfied);
        CHECK(has_reason(rep.structure, "InadmissibleShock"));
    }
    // duplicated forward wave
    {
        const VerifyReport rep =
            verify_profile(layout, mutate(shock, Mutation::DuplicateForwardWave), 96);
        CHECK(!rep.pass);
        CHECK(has_reason(rep.structure, "MultipleForwardWaves"));
    }
    // adjacent simple waves in a backward sector
    {
        std::vector<BackwardItem> items{BackwardShock{eps / 32}, BackwardCompression{eps / 32},
                                        BackwardShock{eps / 32}};
        const Profile mixed = generate_backward(sys, layout, 2, items);
        REQUIRE(verify_profile(layout, mixed, 96).pass);
        const VerifyReport rep = verify_profile(layout, mutate(mixed, Mutation::AdjacentFans), 96);
        CHECK(!rep.pass);
        CHECK(has_reason(rep.structure, "ConsecutiveSimpleWaves"));
    }
    // Rankine-Hugoniot violation >= 1e-4 in one component
    {
        MutationParams p;
        p.magnitude = 1e-4;
        const VerifyReport rep = verify_profile(layout, mutate(shock, Mutation::RhViolation, p), 96);
        CHECK(!rep.pass);
    }
}

TEST_CASE("lipschitz_at_resonance: fan edges are resonance points") {
    const SystemPtr sys = shared_euler();
    const SectorLayout& layout = shared_layout();
    const double eps = sys->ball_radius();
    const Profile fan = generate_forward(sys, layout, 2, WaveKind::SimpleWave, eps / 8);

    const double xi0 = fan.breakpoints()[0]; // lambda(V(xi0)) = xi0 at the fan edge
    const double quotient = lipschitz_at_resonance(layout, fan, xi0);
    CHECK(quotient > 0.0);
    CHECK(quotient < 1e3);

    const Profile constant = solve_riemann(sys, sys->background(), sys->background()).profile;
    CHECK_THROWS_AS((void)lipschitz_at_resonance(layout, constant, 0.3), Error);

    // backward profiles: the quotient at a shock's resonance endpoint stays
    // below the theoretical constant max(1, 1/delta_L) plus margin
    const Profile back = generate_backward_shocks(sys, layout, 2, 4, eps / 48.0);
    const Jump& j = back.jumps()[0];
    const double sigma_plus = sys->eigenvalue(j.v_plus, 2);
    const double q = lipschitz_at_resonance(layout, back, sigma_plus);
    const double c_s = std::max(1.0, 1.0 / layout.delta_l);
    CHECK(q <= c_s + 2.0);
}

TEST_SUITE_END();
