#include <doctest.h>

#include <cmath>

#include "selfsim/errors.hpp"
#include "selfsim/rng.hpp"
#include "selfsim/system.hpp"
#include "support/fixtures.hpp"

using namespace selfsim;
using selfsim::testing::euler_system;
using selfsim::testing::p_system;

TEST_SUITE_BEGIN("system");

namespace {

SystemPtr shared_euler() {
    static SystemPtr sys = euler_system(2.0, 0.05);
    return sys;
}

SystemPtr shared_psystem() {
    static SystemPtr sys = p_system();
    return sys;
}

} // namespace

TEST_CASE("make_system accepts supersonic Euler and rejects subsonic data") {
    const SystemPtr sys = shared_euler();
    CHECK(sys->dim() == 3);
    CHECK(sys->ball_radius() > 0.0);

    try {
        (void)euler_system(0.5, 0.05); // background (1, 0.5, 0)
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotStrictlyHyperbolic);
    }
}

TEST_CASE("p-system fixture builds with two genuinely nonlinear fields") {
    const SystemPtr sys = shared_psystem();
    CHECK(sys->dim() == 2);
    for (const FieldInfo& f : sys->fields()) {
        CHECK(f.kind == FieldKind::GenuinelyNonlinear);
        CHECK(f.gnl_min > 0.0);
        CHECK(f.admissible_sign > 0.0);
        CHECK(f.forward_halfplane == Halfplane::XPos);
    }
}

TEST_CASE("change of variables round-trips on the ball") {
    const SystemPtr sys = shared_euler();
    Rng rng(99);
    for (int k = 0; k < 256; ++k) {
        const Vec u = rng.in_ball(sys->u_background(), sys->ball_radius());
        const Vec back = sys->from_V(sys->to_V(u));
        CHECK((u - back).norm() < 1e-10);
    }
}

TEST_CASE("entropy gauge and compatibility") {
    const SystemPtr sys = shared_euler();
    CHECK(sys->entropy_grad(sys->background()).norm_inf() < 1e-12);
    CHECK(std::fabs(sys->entropy(sys->background())) < 1e-14);

    Rng rng(123);
    for (int k = 0; k < 32; ++k) {
        const Vec v = rng.in_ball(sys->background(), sys->ball_radius());
        const Vec qv = fd_gradient([&](const Vec& w) { return sys->entropy_flux(w); }, v);
        const Vec ev = sys->entropy_grad(v);
        const Mat fv = sys->jacobian(v);
        Vec want(3);
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int i = 0; i < 3; ++i) s += ev[i] * fv(i, j);
            want[j] = s;
        }
        CHECK((qv - want).norm_inf() < 1e-8);
    }
}

TEST_CASE("averaged Jacobian collapses, commutes and interlaces") {
    const SystemPtr sys = shared_euler();
    const Vec vbar = sys->background();

    // collapsed average equals the pointwise Jacobian
    const Mat a0 = sys->averaged_jacobian(vbar, vbar);
    CHECK((a0 - sys->jacobian(vbar)).norm_inf() < 1e-10);

    // argument swap
    Rng rng(5);
    for (int k = 0; k < 8; ++k) {
        const Vec vp = rng.in_ball(vbar, sys->ball_radius());
        const Vec vm = rng.in_ball(vbar, sys->ball_radius());
        const Mat ab = sys->averaged_jacobian(vp, vm);
        const Mat ba = sys->averaged_jacobian(vm, vp);
        CHECK((ab - ba).norm_inf() < 1e-10);
    }

    // hat eigenvalue between the endpoint eigenvalues for a short segment
    // aligned with an eigenvector
    const EigenDecomp d = sys->eigen(vbar);
    for (int a = 0; a < 3; ++a) {
        const Vec dv = 1e-4 * d.right[a];
        const Vec vp = vbar + dv, vm = vbar - dv;
        const EigenDecomp hat = sys->hat_eigen(vp, vm);
        const double lo = std::min(sys->eigenvalue(vp, a), sys->eigenvalue(vm, a));
        const double hi = std::max(sys->eigenvalue(vp, a), sys->eigenvalue(vm, a));
        CHECK(hat.values[a] > lo - 1e-8);
        CHECK(hat.values[a] < hi + 1e-8);
    }
}

TEST_CASE("hat eigenvalues collapse at the background and stay within the slack") {
    const SystemPtr sys = shared_euler();
    const Vec vbar = sys->background();
    const EigenDecomp at_bar = sys->hat_eigen(vbar, vbar);
    const Vec lam = sys->eigenvalues(vbar);
    for (int a = 0; a < 3; ++a) CHECK(std::fabs(at_bar.values[a] - lam[a]) < 1e-10);

    Rng rng(17);
    for (int k = 0; k < 16; ++k) {
        const Vec vp = rng.in_ball(vbar, sys->ball_radius());
        const Vec vm = rng.in_ball(vbar, sys->ball_radius());
        const EigenDecomp hat = sys->hat_eigen(vp, vm);
        for (int a = 0; a < 3; ++a)
            CHECK(std::fabs(hat.values[a] - lam[a]) <= sys->spectral_slack() + 1e-12);
    }

    const SystemPtr ps = shared_psystem();
    const EigenDecomp hat2 = ps->hat_eigen(ps->background() + Vec{0.01, 0.0},
                                           ps->background() - Vec{0.0, 0.01});
    CHECK(hat2.values[0] < hat2.values[1]);
}

TEST_CASE("field classification: contact family between two nonlinear ones") {
    const SystemPtr sys = shared_euler();
    const auto& fields = classify_fields(*sys);
    REQUIRE(fields.size() == 3);
    CHECK(fields[0].kind == FieldKind::GenuinelyNonlinear);
    CHECK(fields[1].kind == FieldKind::LinearlyDegenerate);
    CHECK(fields[2].kind == FieldKind::GenuinelyNonlinear);

    // supersonic rightward background: every forward sector sits in x > 0
    for (const FieldInfo& f : fields) CHECK(f.forward_halfplane == Halfplane::XPos);

    // oriented nonlinearity is strictly positive across the ball
    Rng rng(31);
    for (int k = 0; k < 16; ++k) {
        const Vec v = rng.in_ball(sys->background(), sys->ball_radius());
        CHECK(sys->gnl_indicator(v, 0) > 0.0);
        CHECK(sys->gnl_indicator(v, 2) > 0.0);
        CHECK(std::fabs(sys->gnl_indicator(v, 1)) < 1e-8);
    }
}

TEST_CASE("entropy Hessian form: positive, cross-terms vanish, sign constant") {
    const SystemPtr sys = shared_euler();
    const Vec vbar = sys->background();

    for (int a = 0; a < 3; ++a) CHECK(sys->entropy_hessian_form(vbar, a) > 0.0);

    // e_VV is positive definite at the background (all eigenvalues positive)
    const Vec evv_eigs = sym_eigenvalues(sys->entropy_hess(vbar));
    for (int i = 0; i < 3; ++i) CHECK(evv_eigs[i] > 0.0);

    // cross-family forms vanish by strict hyperbolicity
    const EigenDecomp d = sys->eigen(vbar);
    const Mat h = sys->entropy_hess(vbar);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            if (a == b) continue;
            CHECK(std::fabs(h.form(d.right[a], d.right[b])) < 1e-8);
        }

    Rng rng(77);
    for (int k = 0; k < 64; ++k) {
        const Vec v = rng.in_ball(vbar, sys->ball_radius());
        for (int a = 0; a < 3; ++a) CHECK(sys->entropy_hessian_form(v, a) > 0.0);
    }
}

TEST_CASE("construction failures carry their category") {
    // mixed nonlinearity: scalar flux u^3/3 has indicator 2u, which straddles
    // zero on any ball around u = 0
    {
        RawSystem raw;
        raw.dim = 1;
        raw.flux_x = [](const Vec& u) { return u; };
        raw.flux_x_jac = [](const Vec&) { return Mat::identity(1); };
        raw.flux_y = [](const Vec& u) { return Vec{u[0] * u[0] * u[0] / 3.0}; };
        raw.flux_y_jac = [](const Vec& u) {
            Mat j(1);
            j(0, 0) = u[0] * u[0];
            return j;
        };
        raw.entropy = [](const Vec& u) { return 0.5 * u[0] * u[0]; };
        raw.entropy_flux_x = raw.entropy;
        raw.entropy_flux_y = [](const Vec& u) { return 0.25 * std::pow(u[0], 4); };
        raw.background = Vec{0.0};
        raw.ball_radius = 0.1;
        try {
            (void)make_system(std::move(raw), selfsim::testing::quiet_tolerances());
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::MixedNonlinearity);
        }
    }

    // broken entropy pair: a y-entropy-flux that does not match the fluxes
    {
        RawSystem raw;
        raw.dim = 2;
        raw.flux_x = [](const Vec& u) { return u; };
        raw.flux_x_jac = [](const Vec&) { return Mat::identity(2); };
        raw.flux_y = [](const Vec& u) { return Vec{-u[1], std::pow(u[0], -2.0)}; };
        raw.entropy = [](const Vec& u) { return 0.5 * u[1] * u[1] + 1.0 / u[0]; };
        raw.entropy_flux_x = raw.entropy;
        raw.entropy_flux_y = [](const Vec&) { return 0.0; }; // wrong on purpose
        raw.background = Vec{1.0, 0.0};
        raw.ball_radius = 0.05;
        try {
            (void)make_system(std::move(raw), selfsim::testing::quiet_tolerances());
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::EntropyPairMismatch);
        }
    }

    // singular x-flux Jacobian at the background
    {
        RawSystem raw;
        raw.dim = 2;
        raw.flux_x = [](const Vec& u) { return Vec{u[0] * u[0], u[1]}; };
        raw.flux_x_jac = [](const Vec& u) {
            Mat j(2);
            j(0, 0) = 2.0 * u[0];
            j(1, 1) = 1.0;
            return j;
        };
        raw.flux_y = [](const Vec& u) { return u; };
        raw.entropy = [](const Vec& u) { return u.dot(u); };
        raw.entropy_flux_x = raw.entropy;
        raw.entropy_flux_y = raw.entropy;
        raw.background = Vec{0.0, 0.0}; // d(u1^2)/du1 = 0 here
        raw.ball_radius = 0.05;
        try {
            (void)make_system(std::move(raw), selfsim::testing::quiet_tolerances());
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::NotInvertible);
        }
    }
}

TEST_CASE("x-flux Jacobian at the background has positive spectrum") {
    const SystemPtr sys = shared_euler();
    const Mat jx = fd_jacobian([&](const Vec& u) { return sys->to_V(u); }, sys->u_background());
    const EigenDecomp d = eig_real(jx);
    CHECK(d.values[0] > 0.0);
    CHECK(std::fabs(d.values[0] - 1.0) < 1e-6);
    CHECK(std::fabs(d.values[1] - 2.0) < 1e-6);
    CHECK(std::fabs(d.values[2] - 3.0) < 1e-6);
}

TEST_SUITE_END();
