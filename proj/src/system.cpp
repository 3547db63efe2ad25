#include "selfsim/system.hpp"

#include <cmath>

#include "selfsim/errors.hpp"
#include "selfsim/rng.hpp"

namespace selfsim {

namespace {

// Averaged Jacobian along the straight segment between two states,
// integrated entrywise with Gauss-Kronrod panels.
Mat hat_jacobian(const SystemDef& sys, const Vec& v_plus, const Vec& v_minus) {
    const int m = sys.dim();
    const Vec dv = v_plus - v_minus;
    auto integrand = [&](double s) {
        const Mat j = sys.jacobian(v_minus + s * dv);
        std::vector<double> flat(static_cast<std::size_t>(m * m));
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k) flat[static_cast<std::size_t>(i * m + k)] = j(i, k);
        return flat;
    };
    const std::vector<double> flat =
        quad_adaptive_multi(integrand, 0.0, 1.0, sys.tol().hat_quad_tol, {}, sys.tol().quad_max_panels);
    Mat a(m);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) a(i, k) = flat[static_cast<std::size_t>(i * m + k)];
    return a;
}

} // namespace

Mat SystemDef::flux_x_jac_u(const Vec& u) const {
    if (raw_.flux_x_jac) return raw_.flux_x_jac(u);
    return fd_jacobian(raw_.flux_x, u, tol_.newton_fd_step);
}

Mat SystemDef::flux_y_jac_u(const Vec& u) const {
    if (raw_.flux_y_jac) return raw_.flux_y_jac(u);
    return fd_jacobian(raw_.flux_y, u, tol_.newton_fd_step);
}

Vec SystemDef::entropy_grad_u(const Vec& u) const {
    if (raw_.entropy_grad) return raw_.entropy_grad(u);
    return fd_gradient(raw_.entropy, u, tol_.fd_step);
}

Vec SystemDef::to_V(const Vec& u) const { return raw_.flux_x(u); }

Vec SystemDef::from_V(const Vec& v) const {
    // first-order predictor from the background, then Newton
    const Vec du = solve_linear(flux_x_jac_u(raw_.background), v - v_bar_);
    return from_V(v, raw_.background + du);
}

Vec SystemDef::from_V(const Vec& v, const Vec& u_guess) const {
    NewtonOptions opts;
    opts.tol = 0.1 * tol_.roundtrip_tol;
    opts.max_iter = tol_.newton_max_iter;
    opts.jacobian = [this](const Vec& u) { return flux_x_jac_u(u); };
    auto res = newton_solve([this, &v](const Vec& u) { return raw_.flux_x(u) - v; }, u_guess, opts);
    return res.x;
}

Vec SystemDef::flux(const Vec& v) const { return raw_.flux_y(from_V(v)); }

Mat SystemDef::jacobian(const Vec& v) const {
    const Vec u = from_V(v);
    return flux_y_jac_u(u) * inverse(flux_x_jac_u(u));
}

double SystemDef::entropy(const Vec& v) const {
    const Vec u = from_V(v);
    return raw_.entropy_flux_x(u) + egrad_shift_.dot(raw_.flux_x(u)) - entropy_offset_;
}

double SystemDef::entropy_flux(const Vec& v) const {
    const Vec u = from_V(v);
    return raw_.entropy_flux_y(u) + egrad_shift_.dot(raw_.flux_y(u)) - entropy_flux_offset_;
}

Vec SystemDef::entropy_grad(const Vec& v) const {
    // e_V = eta_U + w at U(V): the affine gauge w makes this vanish at the background
    const Vec u = from_V(v);
    return entropy_grad_u(u) + egrad_shift_;
}

Mat SystemDef::entropy_hess(const Vec& v) const {
    const Vec u = from_V(v);
    if (raw_.entropy_hess) return raw_.entropy_hess(u) * inverse(flux_x_jac_u(u));
    return fd_hessian([this](const Vec& w) { return entropy(w); }, v, tol_.fd_hessian_step);
}

EigenDecomp SystemDef::eigen(const Vec& v) const {
    EigenDecomp d = eig_real(jacobian(v), tol_);
    for (int a = 0; a < dim(); ++a) {
        d.right[a] *= flips_[a];
        d.left[a] *= flips_[a];
    }
    return d;
}

Vec SystemDef::eigenvalues(const Vec& v) const {
    if (raw_.lambda_closed) return raw_.lambda_closed(from_V(v));
    return eig_real(jacobian(v), tol_).values;
}

double SystemDef::gnl_indicator(const Vec& v, int family) const {
    const EigenDecomp d = eigen(v);
    const Vec grad = fd_gradient(
        [this, family](const Vec& w) { return eigenvalues(w)[family]; }, v, tol_.fd_step);
    return grad.dot(d.right[family]);
}

Mat SystemDef::averaged_jacobian(const Vec& v_plus, const Vec& v_minus) const {
    if (!in_ball(v_plus) || !in_ball(v_minus))
        raise(Errc::OutOfBall, "averaged Jacobian argument outside the ball");
    return hat_jacobian(*this, v_plus, v_minus);
}

EigenDecomp SystemDef::hat_eigen(const Vec& v_plus, const Vec& v_minus) const {
    EigenDecomp d = eig_real(averaged_jacobian(v_plus, v_minus), tol_);
    for (int a = 0; a < dim(); ++a) {
        d.right[a] *= flips_[a];
        d.left[a] *= flips_[a];
    }
    return d;
}

double SystemDef::entropy_hessian_form(const Vec& v, int family) const {
    if (!in_ball(v)) raise(Errc::OutOfBall, "state outside the ball");
    const EigenDecomp d = eigen(v);
    const double value = entropy_hess(v).form(d.right[family], d.right[family]);
    if (std::fabs(value) < tol_.hessian_form_floor)
        raise(Errc::DegenerateForm, "entropy Hessian form vanishes along an eigenvector");
    return value;
}

std::vector<Vec> ball_samples(const SystemDef& sys) {
    const int m = sys.dim();
    const double eps = sys.ball_radius();
    const Vec& center = sys.background();

    std::vector<Vec> pts;
    // 3^m axis lattice scaled to stay inside the Euclidean ball
    const double step = eps / std::sqrt(static_cast<double>(m));
    const int count = static_cast<int>(std::pow(3, m));
    for (int code = 0; code < count; ++code) {
        Vec p = center;
        int c = code;
        for (int i = 0; i < m; ++i) {
            p[i] += step * ((c % 3) - 1);
            c /= 3;
        }
        pts.push_back(p);
    }
    Rng rng(sys.tol().seed);
    for (int k = 0; k < sys.tol().ball_random_samples; ++k) pts.push_back(rng.in_ball(center, eps));
    return pts;
}

namespace {

struct ValidationFailure {
    bool shrinkable = false; // whether halving eps may cure it
    Errc code = Errc::NotStrictlyHyperbolic;
    std::string what;
};

// Runs all sampled checks for the current ball radius.  Returns nullopt on
// success; classification results are written into sys-owned members by the
// caller on the final successful round.
std::optional<ValidationFailure> validate_once(SystemDef& sys, std::vector<FieldInfo>& fields_out,
                                               std::vector<double>& flips_out) try {
    const int m = sys.dim();
    const Tolerances& tol = sys.tol();
    const std::vector<Vec> samples = ball_samples(sys);

    // strict hyperbolicity and eigen data at every sample
    std::vector<EigenDecomp> decomps;
    decomps.reserve(samples.size());
    for (const Vec& v : samples) decomps.push_back(eig_real(sys.jacobian(v), tol));

    // entropy-pair compatibility: q_V = e_V f_V
    for (const Vec& v : samples) {
        const Vec qv = fd_gradient([&](const Vec& w) { return sys.entropy_flux(w); }, v, tol.fd_step);
        const Vec ev = sys.entropy_grad(v);
        const Mat fv = sys.jacobian(v);
        Vec want(m);
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += ev[i] * fv(i, j);
            want[j] = s;
        }
        const double res = (qv - want).norm_inf();
        if (res > tol.entropy_pair_tol)
            return ValidationFailure{false, Errc::EntropyPairMismatch,
                                     "entropy pair residual " + std::to_string(res)};
        if (res > tol.entropy_pair_soft)
            return ValidationFailure{true, Errc::EntropyPairMismatch,
                                     "entropy pair residual above sampled-invariant target"};
    }

    // uniform separation of the averaged-Jacobian spectra over sampled pairs
    Rng rng(tol.seed + 1);
    std::vector<double> lam_min(m, 1e300), lam_max(m, -1e300);
    auto record = [&](const Vec& values) {
        for (int a = 0; a < m; ++a) {
            lam_min[a] = std::min(lam_min[a], values[a]);
            lam_max[a] = std::max(lam_max[a], values[a]);
        }
    };
    for (const auto& d : decomps) record(d.values);
    for (int k = 0; k < tol.pair_samples; ++k) {
        const Vec vp = rng.in_ball(sys.background(), sys.ball_radius());
        const Vec vm = rng.in_ball(sys.background(), sys.ball_radius());
        record(eig_real(hat_jacobian(sys, vp, vm), tol).values);
    }
    for (int a = 0; a + 1 < m; ++a) {
        if (!(lam_max[a] + tol.eig_gap < lam_min[a + 1]))
            return ValidationFailure{true, Errc::NotStrictlyHyperbolic,
                                     "sampled spectra of adjacent families overlap"};
    }

    // classification: sign pattern of lambda_V . r per family (before flips)
    std::vector<double> flips(m, 1.0);
    std::vector<FieldInfo> fields(m);
    for (int a = 0; a < m; ++a) {
        double lo = 1e300, hi = -1e300;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const Vec grad = fd_gradient(
                [&](const Vec& w) { return sys.eigenvalues(w)[a]; }, samples[i], tol.fd_step);
            const double ind = grad.dot(decomps[i].right[a]);
            lo = std::min(lo, ind);
            hi = std::max(hi, ind);
        }
        FieldInfo info;
        info.family = a;
        if (lo > tol.ld_threshold) {
            info.kind = FieldKind::GenuinelyNonlinear;
            flips[a] = 1.0;
            info.gnl_min = lo;
            info.gnl_max = hi;
        } else if (hi < -tol.ld_threshold) {
            info.kind = FieldKind::GenuinelyNonlinear;
            flips[a] = -1.0;
            info.gnl_min = -hi;
            info.gnl_max = -lo;
        } else if (std::fabs(lo) <= tol.ld_threshold && std::fabs(hi) <= tol.ld_threshold) {
            info.kind = FieldKind::LinearlyDegenerate;
            flips[a] = 1.0;
        } else {
            return ValidationFailure{true, Errc::MixedNonlinearity,
                                     "family " + std::to_string(a + 1) +
                                         " indicator straddles zero on the sampled ball"};
        }
        fields[a] = info;
    }

    // e_VV r r: nonzero with constant sign per family
    for (int a = 0; a < m; ++a) {
        double sign = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const Mat h = sys.entropy_hess(samples[i]);
            const double form = h.form(decomps[i].right[a], decomps[i].right[a]);
            if (std::fabs(form) < tol.hessian_form_floor)
                return ValidationFailure{false, Errc::DegenerateForm,
                                         "entropy Hessian form vanishes at a sample"};
            if (sign == 0.0)
                sign = form > 0 ? 1.0 : -1.0;
            else if (sign * form < 0.0)
                return ValidationFailure{true, Errc::DegenerateForm,
                                         "entropy Hessian form changes sign on the ball"};
        }
        fields[a].admissible_sign = sign;
        fields[a].forward_halfplane = sign > 0 ? Halfplane::XPos : Halfplane::XNeg;
    }

    fields_out = std::move(fields);
    flips_out = std::move(flips);
    return std::nullopt;
} catch (const Error& e) {
    // anything thrown by a sampled evaluation (complex spectra, subsonic
    // corners, failed root finds) may be cured by a smaller ball
    return ValidationFailure{true, e.code(), e.what()};
}

} // namespace

SystemPtr make_system(RawSystem raw, Tolerances tol) {
    if (raw.dim < 1 || raw.dim > kMaxDim) raise(Errc::DimensionMismatch, "system dimension out of range");
    if (raw.background.dim() != raw.dim) raise(Errc::DimensionMismatch, "background dimension mismatch");
    if (raw.ball_radius <= 0.0) raise(Errc::OutOfBall, "ball radius must be positive");

    auto sys = std::shared_ptr<SystemDef>(new SystemDef());
    sys->raw_ = std::move(raw);
    sys->tol_ = tol;
    sys->flips_.assign(sys->raw_.dim, 1.0);
    sys->egrad_shift_ = Vec(sys->raw_.dim);

    // the change of variables needs a regular f^x Jacobian at the background
    const Mat jx = sys->flux_x_jac_u(sys->raw_.background);
    if (std::fabs(determinant(jx)) < 1e-12)
        raise(Errc::NotInvertible, "f^x Jacobian is singular at the background state");

    sys->v_bar_ = sys->raw_.flux_x(sys->raw_.background);
    sys->eps_ = sys->raw_.ball_radius;

    // re-gauge the entropy so e_V(V-bar) = 0
    sys->egrad_shift_ = -1.0 * sys->entropy_grad_u(sys->raw_.background);
    sys->entropy_offset_ = 0.0;
    sys->entropy_flux_offset_ = 0.0;
    sys->entropy_offset_ = sys->entropy(sys->v_bar_);
    sys->entropy_flux_offset_ = sys->entropy_flux(sys->v_bar_);

    // strict hyperbolicity at the background is not negotiable
    (void)eig_real(sys->jacobian(sys->v_bar_), tol);

    std::vector<FieldInfo> fields;
    std::vector<double> flips;
    for (int round = 0;; ++round) {
        const auto failure = validate_once(*sys, fields, flips);
        if (!failure) break;
        if (!failure->shrinkable || round >= tol.max_eps_halvings)
            raise(failure->code, failure->what);
        sys->eps_ *= 0.5;
    }
    sys->fields_ = std::move(fields);
    sys->flips_ = std::move(flips);

    // spectral slack: sampled sup of |lambda(V) - hat-lambda(V+,V-)| over triples
    Rng rng(tol.seed + 2);
    double slack = 0.0;
    for (int k = 0; k < tol.pair_samples; ++k) {
        const Vec v = rng.in_ball(sys->v_bar_, sys->eps_);
        const Vec vp = rng.in_ball(sys->v_bar_, sys->eps_);
        const Vec vm = rng.in_ball(sys->v_bar_, sys->eps_);
        const Vec lam = sys->eigenvalues(v);
        const Vec hat = eig_real(hat_jacobian(*sys, vp, vm), tol).values;
        for (int a = 0; a < sys->dim(); ++a) slack = std::max(slack, std::fabs(lam[a] - hat[a]));
    }
    sys->delta_s_ = slack;

    return sys;
}

} // namespace selfsim
