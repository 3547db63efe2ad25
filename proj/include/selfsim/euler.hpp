#pragma once

#include <functional>
#include <utility>

#include "selfsim/system.hpp"
#include "selfsim/vec.hpp"

namespace selfsim {

/// Barotropic pressure law p(rho) with c^2 = p'(rho) > 0.  The gamma-law
/// variant is normalized so that c(1) = 1, i.e. p = rho^gamma / gamma.
class PressureLaw {
public:
    /// p(rho) = rho^gamma / gamma (gamma > 0, closed-form internal energy for
    /// gamma != 1, log form for gamma = 1).
    static PressureLaw gamma_law(double gamma);

    /// General hook: supply p and p'. The slope condition c_rho > -1 is
    /// checked numerically on [0.5, 2]; internal energy is integrated
    /// numerically (its gauge constant is irrelevant after the entropy
    /// re-gauging in make_system).
    static PressureLaw from_functions(std::function<double(double)> p,
                                      std::function<double(double)> dp);

    double p(double rho) const { return p_(rho); }
    double c2(double rho) const { return dp_(rho); }
    double c(double rho) const;
    double c_rho(double rho) const; // dc/drho
    double internal_energy(double rho) const;
    double gamma() const { return gamma_; } // NaN for general laws

private:
    PressureLaw() = default;
    std::function<double(double)> p_, dp_;
    std::function<double(double)> energy_;
    std::function<double(double)> c_rho_;
    double gamma_ = 0.0;
};

/// Euler state in conserved variables (rho, m, n) with the usual derived
/// quantities; M is the axial Mach number u/c.
struct EulerState {
    double rho = 1.0;
    double m = 0.0;
    double n = 0.0;

    double u() const { return m / rho; }
    double v() const { return n / rho; }
    double speed() const { return std::sqrt(u() * u() + v() * v()); }
    double sound_speed(const PressureLaw& law) const { return law.c(rho); }
    double mach(const PressureLaw& law) const { return u() / sound_speed(law); }

    Vec as_vec() const { return Vec{rho, m, n}; }
    static EulerState from_vec(const Vec& u) { return {u[0], u[1], u[2]}; }
};

/// Mach angle and the six sector center rays of a supersonic state.
struct MachGeometry {
    double mach = 0.0;
    double mu = 0.0; // arcsin(1/M), radians
    // unit vectors: {(1,0), (cos mu, sin mu), (cos mu, -sin mu)} and negatives
    double forward_rays[3][2] = {};
    double backward_rays[3][2] = {};
};

MachGeometry mach_geometry(double mach);

// fluxes and Jacobians (throw NonPhysical for rho <= 0)
Vec euler_flux_x(const PressureLaw& law, const EulerState& s);
Vec euler_flux_y(const PressureLaw& law, const EulerState& s);
Mat euler_flux_x_jac(const PressureLaw& law, const EulerState& s);
Mat euler_flux_y_jac(const PressureLaw& law, const EulerState& s);

inline std::pair<Vec, Vec> euler_fluxes(const PressureLaw& law, const EulerState& s) {
    return {euler_flux_x(law, s), euler_flux_y(law, s)};
}
inline std::pair<Mat, Mat> euler_jacobians(const PressureLaw& law, const EulerState& s) {
    return {euler_flux_x_jac(law, s), euler_flux_y_jac(law, s)};
}

/// Characteristic directions xi = y/x of the steady problem: roots of
/// det(f^y_U - xi f^x_U) together with generalized eigenvectors.
/// Requires the axial supersonic condition m > rho c (throws Subsonic).
struct EulerEigenFields {
    double lambda_minus = 0.0, lambda_0 = 0.0, lambda_plus = 0.0;
    Vec r_minus, r_0, r_plus;

    Vec lambdas_ascending() const { return Vec{lambda_minus, lambda_0, lambda_plus}; }
};

EulerEigenFields euler_eigen_fields(const PressureLaw& law, const EulerState& s);

enum class EulerFamily { Minus, Zero, Plus };

/// Closed-form gradient of the chosen characteristic speed.
Vec euler_lambda_grad(const PressureLaw& law, const EulerState& s, EulerFamily f);

/// grad(lambda) . r with the closed-form eigenvector normalization
/// (r_pm = (+-m, ...) which reduces to (+-M, +-(M^2-1), sqrt(M^2-1)) at the
/// background).  Zero for the 0-family: it is linearly degenerate.
double euler_gnl_indicator(const PressureLaw& law, const EulerState& s, EulerFamily f);

struct EntropyPair {
    double eta = 0.0;
    double psi_x = 0.0;
    double psi_y = 0.0;
};

/// eta = rho (e(rho) + |v|^2 / 2),  psi = (eta + p) v.
EntropyPair euler_entropy_pair(const PressureLaw& law, const EulerState& s);

Vec euler_entropy_grad(const PressureLaw& law, const EulerState& s);  // eta_U
Mat euler_entropy_hess(const PressureLaw& law, const EulerState& s);  // eta_UU

/// Rotate the momentum vector by angle theta (density unchanged).
EulerState rotate_state(const EulerState& s, double theta);

/// SystemDef for isentropic Euler around the supersonic background state.
/// All Jacobians, the entropy Hessian and the characteristic speeds are
/// supplied in closed form.
SystemPtr make_euler_system(const PressureLaw& law, const EulerState& background, double eps,
                            Tolerances tol = default_tolerances());

} // namespace selfsim
