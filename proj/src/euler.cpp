#include "selfsim/euler.hpp"

#include <cmath>
#include <limits>

#include "selfsim/errors.hpp"
#include "selfsim/numerics.hpp"

namespace selfsim {

namespace {

void require_physical(const EulerState& s) {
    if (!(s.rho > 0.0)) raise(Errc::NonPhysical, "density must be positive");
}

void require_supersonic(const PressureLaw& law, const EulerState& s) {
    require_physical(s);
    const double a = s.rho * law.c(s.rho);
    if (s.m * s.m + s.n * s.n <= a * a || s.m <= a)
        raise(Errc::Subsonic, "state is not axially supersonic (requires m > rho c)");
}

} // namespace

PressureLaw PressureLaw::gamma_law(double gamma) {
    if (gamma <= 0.0) raise(Errc::NonPhysical, "gamma must be positive");
    PressureLaw law;
    law.gamma_ = gamma;
    law.p_ = [gamma](double rho) { return std::pow(rho, gamma) / gamma; };
    law.dp_ = [gamma](double rho) { return std::pow(rho, gamma - 1.0); };
    law.c_rho_ = [gamma](double rho) {
        return 0.5 * (gamma - 1.0) * std::pow(rho, 0.5 * (gamma - 3.0));
    };
    if (gamma == 1.0) {
        law.energy_ = [](double rho) { return std::log(rho); };
    } else {
        law.energy_ = [gamma](double rho) {
            return std::pow(rho, gamma - 1.0) / (gamma * (gamma - 1.0));
        };
    }
    return law;
}

PressureLaw PressureLaw::from_functions(std::function<double(double)> p,
                                        std::function<double(double)> dp) {
    PressureLaw law;
    law.gamma_ = std::numeric_limits<double>::quiet_NaN();
    law.p_ = std::move(p);
    law.dp_ = std::move(dp);
    law.c_rho_ = [law_dp = law.dp_](double rho) {
        const double h = 1e-6 * std::max(1.0, rho);
        const double cp = std::sqrt(law_dp(rho + h));
        const double cm = std::sqrt(law_dp(rho - h));
        return (cp - cm) / (2.0 * h);
    };
    law.energy_ = [law_p = law.p_](double rho) {
        auto integrand = [&](double r) { return Vec{law_p(r) / (r * r)}; };
        return quad_adaptive(integrand, 1.0, rho, 1e-12)[0];
    };
    // structural checks on a working range
    for (double rho = 0.5; rho <= 2.0; rho += 0.125) {
        if (!(law.dp_(rho) > 0.0)) raise(Errc::NonPhysical, "c^2 = p'(rho) must be positive");
        if (!(law.c_rho_(rho) > -1.0)) raise(Errc::NonPhysical, "pressure law violates c_rho > -1");
    }
    return law;
}

double PressureLaw::c(double rho) const {
    const double c2v = dp_(rho);
    if (!(c2v > 0.0)) raise(Errc::NonPhysical, "sound speed undefined (p' <= 0)");
    return std::sqrt(c2v);
}

double PressureLaw::c_rho(double rho) const { return c_rho_(rho); }

double PressureLaw::internal_energy(double rho) const {
    if (!(rho > 0.0)) raise(Errc::NonPhysical, "density must be positive");
    return energy_(rho);
}

MachGeometry mach_geometry(double mach) {
    if (!(mach > 1.0)) raise(Errc::Subsonic, "Mach angle requires M > 1");
    MachGeometry g;
    g.mach = mach;
    g.mu = std::asin(1.0 / mach);
    const double c = std::cos(g.mu), s = std::sin(g.mu);
    const double fwd[3][2] = {{1.0, 0.0}, {c, s}, {c, -s}};
    for (int i = 0; i < 3; ++i) {
        g.forward_rays[i][0] = fwd[i][0];
        g.forward_rays[i][1] = fwd[i][1];
        g.backward_rays[i][0] = -fwd[i][0];
        g.backward_rays[i][1] = -fwd[i][1];
    }
    return g;
}

Vec euler_flux_x(const PressureLaw& law, const EulerState& s) {
    require_physical(s);
    return Vec{s.m, s.m * s.m / s.rho + law.p(s.rho), s.m * s.n / s.rho};
}

Vec euler_flux_y(const PressureLaw& law, const EulerState& s) {
    require_physical(s);
    return Vec{s.n, s.m * s.n / s.rho, s.n * s.n / s.rho + law.p(s.rho)};
}

Mat euler_flux_x_jac(const PressureLaw& law, const EulerState& s) {
    require_physical(s);
    const double rho = s.rho, m = s.m, n = s.n;
    const double c2 = law.c2(rho);
    Mat j(3);
    j(0, 0) = 0.0;
    j(0, 1) = 1.0;
    j(0, 2) = 0.0;
    j(1, 0) = -m * m / (rho * rho) + c2;
    j(1, 1) = 2.0 * m / rho;
    j(1, 2) = 0.0;
    j(2, 0) = -m * n / (rho * rho);
    j(2, 1) = n / rho;
    j(2, 2) = m / rho;
    return j;
}

Mat euler_flux_y_jac(const PressureLaw& law, const EulerState& s) {
    require_physical(s);
    const double rho = s.rho, m = s.m, n = s.n;
    const double c2 = law.c2(rho);
    Mat j(3);
    j(0, 0) = 0.0;
    j(0, 1) = 0.0;
    j(0, 2) = 1.0;
    j(1, 0) = -m * n / (rho * rho);
    j(1, 1) = n / rho;
    j(1, 2) = m / rho;
    j(2, 0) = -n * n / (rho * rho) + c2;
    j(2, 1) = 0.0;
    j(2, 2) = 2.0 * n / rho;
    return j;
}

EulerEigenFields euler_eigen_fields(const PressureLaw& law, const EulerState& s) {
    require_supersonic(law, s);
    const double rho = s.rho, m = s.m, n = s.n;
    const double a = rho * law.c(rho); // rho c
    const double S = std::sqrt(m * m + n * n - a * a);
    const double D = m * m - a * a;

    EulerEigenFields f;
    f.lambda_minus = (m * n - a * S) / D;
    f.lambda_plus = (m * n + a * S) / D;
    f.lambda_0 = n / m;
    f.r_0 = Vec{0.0, m, n};

    const double u = s.u(), v = s.v(), c2 = law.c2(rho);
    auto r_pm = [&](double lambda, double sign) {
        const double r1 = sign * m;
        const double r2 = (u * v + lambda * (c2 - u * u)) / (v - lambda * u) * r1;
        return Vec{r1, r2, lambda * r2};
    };
    f.r_minus = r_pm(f.lambda_minus, -1.0);
    f.r_plus = r_pm(f.lambda_plus, +1.0);
    return f;
}

Vec euler_lambda_grad(const PressureLaw& law, const EulerState& s, EulerFamily fam) {
    require_supersonic(law, s);
    const double rho = s.rho, m = s.m, n = s.n;
    if (fam == EulerFamily::Zero) return Vec{0.0, -n / (m * m), 1.0 / m};

    const double sign = (fam == EulerFamily::Plus) ? 1.0 : -1.0;
    const double c = law.c(rho);
    const double a = rho * c;
    const double da = c + rho * law.c_rho(rho); // d(rho c)/drho
    const double S = std::sqrt(m * m + n * n - a * a);
    const double D = m * m - a * a;
    const double num = m * n + sign * a * S;

    Vec g(3);
    g[0] = da * (sign * (S - a * a / S) / D + 2.0 * a * num / (D * D));
    g[1] = (n + sign * a * m / S) / D - 2.0 * m * num / (D * D);
    g[2] = (m + sign * a * n / S) / D;
    return g;
}

double euler_gnl_indicator(const PressureLaw& law, const EulerState& s, EulerFamily fam) {
    const EulerEigenFields f = euler_eigen_fields(law, s);
    const Vec grad = euler_lambda_grad(law, s, fam);
    const Vec& r = (fam == EulerFamily::Zero) ? f.r_0
                   : (fam == EulerFamily::Plus) ? f.r_plus
                                                : f.r_minus;
    return grad.dot(r);
}

EntropyPair euler_entropy_pair(const PressureLaw& law, const EulerState& s) {
    require_physical(s);
    EntropyPair pair;
    const double kinetic = 0.5 * (s.u() * s.u() + s.v() * s.v());
    pair.eta = s.rho * (law.internal_energy(s.rho) + kinetic);
    const double h = pair.eta + law.p(s.rho);
    pair.psi_x = h * s.u();
    pair.psi_y = h * s.v();
    return pair;
}

Vec euler_entropy_grad(const PressureLaw& law, const EulerState& s) {
    require_physical(s);
    const double kinetic = 0.5 * (s.u() * s.u() + s.v() * s.v());
    return Vec{law.internal_energy(s.rho) + law.p(s.rho) / s.rho - kinetic, s.u(), s.v()};
}

Mat euler_entropy_hess(const PressureLaw& law, const EulerState& s) {
    require_physical(s);
    const double rho = s.rho, u = s.u(), v = s.v();
    const double c2 = law.c2(rho);
    Mat h(3);
    h(0, 0) = (c2 + u * u + v * v) / rho;
    h(0, 1) = -u / rho;
    h(0, 2) = -v / rho;
    h(1, 0) = -u / rho;
    h(1, 1) = 1.0 / rho;
    h(1, 2) = 0.0;
    h(2, 0) = -v / rho;
    h(2, 1) = 0.0;
    h(2, 2) = 1.0 / rho;
    return h;
}

EulerState rotate_state(const EulerState& s, double theta) {
    const double c = std::cos(theta), sn = std::sin(theta);
    return {s.rho, c * s.m - sn * s.n, sn * s.m + c * s.n};
}

SystemPtr make_euler_system(const PressureLaw& law, const EulerState& background, double eps,
                            Tolerances tol) {
    require_physical(background);
    RawSystem raw;
    raw.dim = 3;
    raw.flux_x = [law](const Vec& u) { return euler_flux_x(law, EulerState::from_vec(u)); };
    raw.flux_y = [law](const Vec& u) { return euler_flux_y(law, EulerState::from_vec(u)); };
    raw.flux_x_jac = [law](const Vec& u) { return euler_flux_x_jac(law, EulerState::from_vec(u)); };
    raw.flux_y_jac = [law](const Vec& u) { return euler_flux_y_jac(law, EulerState::from_vec(u)); };
    raw.entropy = [law](const Vec& u) { return euler_entropy_pair(law, EulerState::from_vec(u)).eta; };
    raw.entropy_flux_x = [law](const Vec& u) {
        return euler_entropy_pair(law, EulerState::from_vec(u)).psi_x;
    };
    raw.entropy_flux_y = [law](const Vec& u) {
        return euler_entropy_pair(law, EulerState::from_vec(u)).psi_y;
    };
    raw.entropy_grad = [law](const Vec& u) { return euler_entropy_grad(law, EulerState::from_vec(u)); };
    raw.entropy_hess = [law](const Vec& u) { return euler_entropy_hess(law, EulerState::from_vec(u)); };
    raw.lambda_closed = [law](const Vec& u) {
        const EulerEigenFields f = euler_eigen_fields(law, EulerState::from_vec(u));
        Vec lam = f.lambdas_ascending();
        if (!(lam[0] < lam[1] && lam[1] < lam[2]))
            raise(Errc::NotStrictlyHyperbolic, "characteristic speeds out of order");
        return lam;
    };
    raw.background = background.as_vec();
    raw.ball_radius = eps;
    return make_system(std::move(raw), tol);
}

} // namespace selfsim
