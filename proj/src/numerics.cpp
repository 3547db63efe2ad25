#include "selfsim/numerics.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "selfsim/errors.hpp"

namespace selfsim {

namespace {

Eigen::MatrixXd to_eigen(const Mat& a) {
    const int n = a.dim();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = a(i, j);
    return m;
}

Vec from_eigen(const Eigen::VectorXd& v) {
    Vec r(static_cast<int>(v.size()));
    for (int i = 0; i < r.dim(); ++i) r[i] = v(i);
    return r;
}

} // namespace

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NotStrictlyHyperbolic: return "NotStrictlyHyperbolic";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::SingularJacobian: return "SingularJacobian";
        case Errc::StepFailure: return "StepFailure";
        case Errc::ToleranceNotMet: return "ToleranceNotMet";
        case Errc::NotInvertible: return "NotInvertible";
        case Errc::EntropyPairMismatch: return "EntropyPairMismatch";
        case Errc::MixedNonlinearity: return "MixedNonlinearity";
        case Errc::DegenerateForm: return "DegenerateForm";
        case Errc::LeftBall: return "LeftBall";
        case Errc::NotGNL: return "NotGNL";
        case Errc::NotLD: return "NotLD";
        case Errc::NotAJump: return "NotAJump";
        case Errc::OutOfBall: return "OutOfBall";
        case Errc::SectorsOverlap: return "SectorsOverlap";
        case Errc::NotResonant: return "NotResonant";
        case Errc::IncompatibleKind: return "IncompatibleKind";
        case Errc::DoesNotFit: return "DoesNotFit";
        case Errc::ConsecutiveSimpleWaves: return "ConsecutiveSimpleWaves";
        case Errc::InapplicableMutation: return "InapplicableMutation";
        case Errc::NonPhysical: return "NonPhysical";
        case Errc::Subsonic: return "Subsonic";
        case Errc::DimensionMismatch: return "DimensionMismatch";
    }
    return "UnknownError";
}

EigenDecomp eig_real(const Mat& a, const Tolerances& tol) {
    const int n = a.dim();
    Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(a));
    if (es.info() != Eigen::Success)
        raise(Errc::NotStrictlyHyperbolic, "eigen decomposition did not converge");

    for (int i = 0; i < n; ++i) {
        if (std::fabs(es.eigenvalues()(i).imag()) > tol.eig_gap)
            raise(Errc::NotStrictlyHyperbolic, "complex eigenvalue pair detected");
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return es.eigenvalues()(i).real() < es.eigenvalues()(j).real();
    });

    EigenDecomp d;
    d.values = Vec(n);
    for (int i = 0; i < n; ++i) d.values[i] = es.eigenvalues()(order[i]).real();

    for (int i = 0; i + 1 < n; ++i) {
        if (d.values[i + 1] - d.values[i] < tol.eig_gap)
            raise(Errc::NotStrictlyHyperbolic, "eigenvalue separation below gap tolerance");
    }

    Eigen::MatrixXd r(n, n);
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd col = es.eigenvectors().col(order[k]).real();
        col.normalize();
        // sign convention: largest-magnitude entry positive
        int imax = 0;
        for (int i = 1; i < n; ++i)
            if (std::fabs(col(i)) > std::fabs(col(imax))) imax = i;
        if (col(imax) < 0.0) col = -col;
        r.col(k) = col;
    }

    Eigen::MatrixXd l = r.inverse(); // rows are the biorthonormal left eigenvectors

    d.right.reserve(n);
    d.left.reserve(n);
    for (int k = 0; k < n; ++k) {
        d.right.push_back(from_eigen(r.col(k)));
        d.left.push_back(from_eigen(l.row(k).transpose()));
    }

    // conditioning check: residual biorthonormality
    for (int b = 0; b < n; ++b)
        for (int al = 0; al < n; ++al) {
            const double want = (b == al) ? 1.0 : 0.0;
            if (std::fabs(d.left[b].dot(d.right[al]) - want) > tol.eig_biortho)
                raise(Errc::NotStrictlyHyperbolic, "ill-conditioned eigenvector basis");
        }
    return d;
}

Vec sym_eigenvalues(const Mat& a) {
    Eigen::MatrixXd m = to_eigen(a);
    m = 0.5 * (m + m.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    return from_eigen(es.eigenvalues());
}

Vec solve_linear(const Mat& a, const Vec& b) {
    const int n = a.dim();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(to_eigen(a));
    if (!lu.isInvertible()) raise(Errc::SingularJacobian, "linear solve on singular matrix");
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) rhs(i) = b[i];
    return from_eigen(lu.solve(rhs));
}

Mat inverse(const Mat& a) {
    const int n = a.dim();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(to_eigen(a));
    if (!lu.isInvertible()) raise(Errc::SingularJacobian, "inverse of singular matrix");
    Eigen::MatrixXd inv = lu.inverse();
    Mat r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) = inv(i, j);
    return r;
}

double determinant(const Mat& a) { return to_eigen(a).determinant(); }

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double step) {
    const Vec f0 = f(x);
    Mat j(x.dim());
    for (int c = 0; c < x.dim(); ++c) {
        const double h = std::max(step, step * std::fabs(x[c]));
        Vec xp = x;
        xp[c] += h;
        const Vec fp = f(xp);
        for (int r = 0; r < f0.dim(); ++r) j(r, c) = (fp[r] - f0[r]) / h;
    }
    return j;
}

NewtonResult newton_solve(const std::function<Vec(const Vec&)>& f, const Vec& x0,
                          const NewtonOptions& opts) {
    Vec x = x0;
    Vec fx = f(x);
    if (!fx.finite()) raise(Errc::NoConvergence, "non-finite residual at initial guess");

    for (int it = 0; it < opts.max_iter; ++it) {
        const double res = fx.norm();
        if (res <= opts.tol) return {x, it, res};

        const Mat j = opts.jacobian ? (*opts.jacobian)(x) : fd_jacobian(f, x, opts.fd_step);
        const Vec dx = solve_linear(j, fx);
        x -= dx;
        fx = f(x);
        if (!fx.finite()) raise(Errc::NoConvergence, "non-finite residual during iteration");
    }
    if (fx.norm() <= opts.tol) return {x, opts.max_iter, fx.norm()};
    raise(Errc::NoConvergence, "Newton iteration exhausted");
}

OdePath ode_rk4(const std::function<Vec(double, const Vec&)>& rhs, const Vec& y0, double s0,
                double s1, int n_steps) {
    if (n_steps < 1) raise(Errc::StepFailure, "ode_rk4 requires at least one step");
    OdePath path;
    path.s.reserve(n_steps + 1);
    path.y.reserve(n_steps + 1);
    path.s.push_back(s0);
    path.y.push_back(y0);

    const double h = (s1 - s0) / n_steps;
    Vec y = y0;
    for (int k = 0; k < n_steps; ++k) {
        const double s = s0 + k * h;
        const Vec k1 = rhs(s, y);
        const Vec k2 = rhs(s + 0.5 * h, y + (0.5 * h) * k1);
        const Vec k3 = rhs(s + 0.5 * h, y + (0.5 * h) * k2);
        const Vec k4 = rhs(s + h, y + h * k3);
        if (!k1.finite() || !k2.finite() || !k3.finite() || !k4.finite())
            raise(Errc::StepFailure, "non-finite right-hand side in RK4");
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        path.s.push_back(s0 + (k + 1) * h);
        path.y.push_back(y);
    }
    return path;
}

namespace {

// Gauss-Kronrod (G7, K15) nodes and weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993945,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
constexpr double kKronrodWeights[8] = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.06309209262997855,
    0.02293532201052922,
};
// Gauss-7 weights for the nodes at indices 0, 2, 4, 6 above.
constexpr double kGaussWeights[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

struct Panel {
    double a, b;
    std::vector<double> value;
    double error;
};

Panel gk15(const std::function<std::vector<double>(double)>& g, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::vector<double> f0 = g(mid);
    const std::size_t n = f0.size();
    std::vector<double> kron(n), gauss(n);
    for (std::size_t c = 0; c < n; ++c) {
        kron[c] = kKronrodWeights[0] * f0[c];
        gauss[c] = kGaussWeights[0] * f0[c];
    }

    for (int i = 1; i < 8; ++i) {
        const std::vector<double> fp = g(mid + half * kKronrodNodes[i]);
        const std::vector<double> fm = g(mid - half * kKronrodNodes[i]);
        for (std::size_t c = 0; c < n; ++c) {
            const double s = fp[c] + fm[c];
            kron[c] += kKronrodWeights[i] * s;
            if (i % 2 == 0) gauss[c] += kGaussWeights[i / 2] * s;
        }
    }

    double err2 = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        kron[c] *= half;
        gauss[c] *= half;
        const double d = kron[c] - gauss[c];
        err2 += d * d;
        if (!std::isfinite(kron[c])) raise(Errc::StepFailure, "non-finite integrand");
    }
    return Panel{a, b, std::move(kron), std::sqrt(err2)};
}

} // namespace

std::vector<double> quad_adaptive_multi(const std::function<std::vector<double>(double)>& g,
                                        double a, double b, double tol,
                                        const std::vector<double>& hints, int max_panels) {
    if (a == b) return std::vector<double>(g(a).size(), 0.0);
    double sign = 1.0;
    double lo = a, hi = b;
    if (lo > hi) {
        std::swap(lo, hi);
        sign = -1.0;
    }

    std::vector<double> bounds{lo};
    for (double h : hints)
        if (h > lo && h < hi) bounds.push_back(h);
    bounds.push_back(hi);
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i)
        panels.push_back(gk15(g, bounds[i], bounds[i + 1]));

    auto total_error = [&] {
        double e = 0.0;
        for (const auto& p : panels) e += p.error;
        return e;
    };

    while (total_error() > tol) {
        if (static_cast<int>(panels.size()) >= max_panels)
            raise(Errc::ToleranceNotMet, "quadrature panel budget exhausted");
        auto worst = std::max_element(panels.begin(), panels.end(),
                                      [](const Panel& x, const Panel& y) { return x.error < y.error; });
        const double mid = 0.5 * (worst->a + worst->b);
        if (mid <= worst->a || mid >= worst->b)
            raise(Errc::ToleranceNotMet, "quadrature interval below machine resolution");
        const Panel left = gk15(g, worst->a, mid);
        const Panel right = gk15(g, mid, worst->b);
        *worst = left;
        panels.push_back(std::move(right));
    }

    std::vector<double> sum(panels.front().value.size(), 0.0);
    for (const auto& p : panels)
        for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += p.value[c];
    for (double& x : sum) x *= sign;
    return sum;
}

Vec quad_adaptive(const std::function<Vec(double)>& g, double a, double b, double tol,
                  const std::vector<double>& hints, int max_panels) {
    int dim = -1;
    auto wrapped = [&](double s) {
        const Vec v = g(s);
        if (dim < 0) dim = v.dim();
        std::vector<double> out(static_cast<std::size_t>(v.dim()));
        for (int i = 0; i < v.dim(); ++i) out[i] = v[i];
        return out;
    };
    const std::vector<double> flat = quad_adaptive_multi(wrapped, a, b, tol, hints, max_panels);
    Vec r(static_cast<int>(flat.size()));
    for (int i = 0; i < r.dim(); ++i) r[i] = flat[i];
    return r;
}

Vec fd_gradient(const std::function<double(const Vec&)>& g, const Vec& x, double step) {
    const double h = step * std::max(1.0, x.norm_inf());
    Vec grad(x.dim());
    for (int i = 0; i < x.dim(); ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        grad[i] = (g(xp) - g(xm)) / (2.0 * h);
    }
    return grad;
}

Mat fd_hessian(const std::function<double(const Vec&)>& g, const Vec& x, double step) {
    const double h = step * std::max(1.0, x.norm_inf());
    const int n = x.dim();
    Mat hess(n);
    const double g0 = g(x);
    for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        hess(i, i) = (g(xp) - 2.0 * g0 + g(xm)) / (h * h);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Vec xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[i] += h;
            xpp[j] += h;
            xpm[i] += h;
            xpm[j] -= h;
            xmp[i] -= h;
            xmp[j] += h;
            xmm[i] -= h;
            xmm[j] -= h;
            const double v = (g(xpp) - g(xpm) - g(xmp) + g(xmm)) / (4.0 * h * h);
            hess(i, j) = v;
            hess(j, i) = v;
        }
    return hess;
}

} // namespace selfsim
