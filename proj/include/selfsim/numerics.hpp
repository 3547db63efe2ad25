#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "selfsim/tolerances.hpp"
#include "selfsim/vec.hpp"

namespace selfsim {

/// Real eigendecomposition of a small matrix with simple spectrum.
/// Eigenvalues are sorted ascending; right eigenvectors have unit length with
/// the largest-magnitude entry positive (owning systems may flip whole
/// families afterwards); left eigenvectors are normalized against the right
/// ones, l^b . r^a = delta_ab.
struct EigenDecomp {
    Vec values;
    std::vector<Vec> right;
    std::vector<Vec> left;

    int dim() const { return values.dim(); }
};

/// Throws NotStrictlyHyperbolic when eigenvalues are closer than tol.eig_gap
/// or carry imaginary parts above it.
EigenDecomp eig_real(const Mat& a, const Tolerances& tol = {});

/// Eigenvalues of a symmetric matrix, ascending (no separation requirement).
Vec sym_eigenvalues(const Mat& a);

/// Dense linear solve; throws SingularJacobian when the factorization fails.
Vec solve_linear(const Mat& a, const Vec& b);

Mat inverse(const Mat& a);

double determinant(const Mat& a);

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 50;
    double fd_step = 1e-7;
    std::optional<std::function<Mat(const Vec&)>> jacobian; // forward differences when absent
};

struct NewtonResult {
    Vec x;
    int iterations = 0;
    double residual = 0.0;
};

/// Newton iteration for F(x) = 0 with |F| measured in the Euclidean norm.
/// Throws NoConvergence / SingularJacobian.
NewtonResult newton_solve(const std::function<Vec(const Vec&)>& f, const Vec& x0,
                          const NewtonOptions& opts = {});

struct OdePath {
    std::vector<double> s;
    std::vector<Vec> y;

    const Vec& endpoint() const { return y.back(); }
};

/// Classical fixed-step RK4 over [s0, s1] with n_steps steps; the sampled
/// path contains n_steps + 1 points.  Throws StepFailure on non-finite
/// right-hand sides.
OdePath ode_rk4(const std::function<Vec(double, const Vec&)>& rhs, const Vec& y0, double s0,
                double s1, int n_steps);

/// Adaptive Gauss-Kronrod (G7,K15) quadrature for vector-valued integrands.
/// Breakpoint hints inside (a, b) seed the initial panel boundaries.  Throws
/// ToleranceNotMet when the panel budget is exhausted.
Vec quad_adaptive(const std::function<Vec(double)>& g, double a, double b, double tol,
                  const std::vector<double>& hints = {}, int max_panels = 4096);

/// Same scheme for integrands of arbitrary component count (used for
/// matrix-valued integrals such as the averaged Jacobian).
std::vector<double> quad_adaptive_multi(const std::function<std::vector<double>(double)>& g,
                                        double a, double b, double tol,
                                        const std::vector<double>& hints = {},
                                        int max_panels = 4096);

/// Central-difference gradient / Hessian with step tol.fd_step * max(1,|x|).
Vec fd_gradient(const std::function<double(const Vec&)>& g, const Vec& x, double step = 1e-5);
Mat fd_hessian(const std::function<double(const Vec&)>& g, const Vec& x, double step = 2.5e-4);

/// Forward-difference Jacobian of a vector map (step per the Newton default).
Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double step = 1e-7);

} // namespace selfsim
