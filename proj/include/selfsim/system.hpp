#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "selfsim/numerics.hpp"
#include "selfsim/tolerances.hpp"
#include "selfsim/vec.hpp"

namespace selfsim {

enum class FieldKind { GenuinelyNonlinear, LinearlyDegenerate };

enum class Halfplane { XPos, XNeg };

inline Halfplane opposite(Halfplane h) { return h == Halfplane::XPos ? Halfplane::XNeg : Halfplane::XPos; }

/// Per-family classification: nonlinearity kind, sign of the entropy-Hessian
/// form e_VV r r on the ball (which decides the admissible shock side), and
/// the halfplane in which this family's sector behaves forward in time.
struct FieldInfo {
    int family = 0; // 0-based
    FieldKind kind = FieldKind::GenuinelyNonlinear;
    double admissible_sign = 1.0;
    Halfplane forward_halfplane = Halfplane::XPos;
    double gnl_min = 0.0; // min of lambda_V.r over samples (after orientation)
    double gnl_max = 0.0;
};

/// Raw description of a planar system of conservation laws in the original
/// conserved variables: both flux components, an entropy triple, and the
/// background state.  Jacobians and the entropy gradient may be omitted, in
/// which case finite differences are used.
struct RawSystem {
    int dim = 0;
    std::function<Vec(const Vec&)> flux_x;
    std::function<Vec(const Vec&)> flux_y;
    std::function<Mat(const Vec&)> flux_x_jac; // optional
    std::function<Mat(const Vec&)> flux_y_jac; // optional
    std::function<double(const Vec&)> entropy;       // eta
    std::function<double(const Vec&)> entropy_flux_x; // psi^x
    std::function<double(const Vec&)> entropy_flux_y; // psi^y
    std::function<Vec(const Vec&)> entropy_grad;     // optional eta_U
    std::function<Mat(const Vec&)> entropy_hess;     // optional eta_UU
    std::function<Vec(const Vec&)> lambda_closed;    // optional closed-form eigenvalues of
                                                     // det(f^y_U - lambda f^x_U) = 0, ascending
    Vec background;     // U-bar
    double ball_radius = 0.0;
};

class SystemDef;
using SystemPtr = std::shared_ptr<const SystemDef>;

/// Strictly hyperbolic system in the transformed coordinates V = f^x(U),
/// where the steady self-similar problem reads (f(V) - xi V)_xi + V = 0 with
/// f(V) = f^y(U(V)).  Immutable after construction; all member calls are
/// pure and safe for concurrent use.
class SystemDef {
public:
    int dim() const { return raw_.dim; }
    const Vec& background() const { return v_bar_; }          // V-bar
    const Vec& u_background() const { return raw_.background; } // U-bar
    double ball_radius() const { return eps_; }
    double spectral_slack() const { return delta_s_; }        // sampled sup |lambda - hat-lambda|
    const Tolerances& tol() const { return tol_; }
    const std::vector<FieldInfo>& fields() const { return fields_; }
    const FieldInfo& field(int family) const { return fields_.at(family); }

    bool in_ball(const Vec& v) const { return (v - v_bar_).norm() <= eps_ * (1.0 + 1e-12); }

    // change of variables
    Vec to_V(const Vec& u) const;
    Vec from_V(const Vec& v) const;
    Vec from_V(const Vec& v, const Vec& u_guess) const;

    // flux and derivatives in V
    Vec flux(const Vec& v) const;
    Mat jacobian(const Vec& v) const; // f_V = f^y_U (f^x_U)^{-1}

    // entropy pair in V, normalized so the entropy gradient vanishes at V-bar
    double entropy(const Vec& v) const;
    double entropy_flux(const Vec& v) const;
    Vec entropy_grad(const Vec& v) const;  // e_V (exact chain rule through U)
    Mat entropy_hess(const Vec& v) const;  // e_VV = eta_UU (f^x_U)^{-1}

    /// Oriented eigendecomposition of f_V(v): per-family sign flips applied so
    /// genuinely nonlinear families satisfy lambda_V . r > 0 on the ball.
    EigenDecomp eigen(const Vec& v) const;
    /// Eigenvalues only (closed form when the raw system provides one).
    Vec eigenvalues(const Vec& v) const;
    double eigenvalue(const Vec& v, int family) const { return eigenvalues(v)[family]; }

    /// Directional derivative lambda^a_V . r^a at v (finite differences on the
    /// eigenvalue map, exact eigenvectors).
    double gnl_indicator(const Vec& v, int family) const;

    Mat averaged_jacobian(const Vec& v_plus, const Vec& v_minus) const;
    EigenDecomp hat_eigen(const Vec& v_plus, const Vec& v_minus) const;

    /// e_VV(v) r^a(v) r^a(v); throws DegenerateForm when it vanishes.
    double entropy_hessian_form(const Vec& v, int family) const;

    friend SystemPtr make_system(RawSystem raw, Tolerances tol);

private:
    SystemDef() = default;

    Mat flux_x_jac_u(const Vec& u) const;
    Mat flux_y_jac_u(const Vec& u) const;
    Vec entropy_grad_u(const Vec& u) const;

    RawSystem raw_;
    Tolerances tol_;
    Vec v_bar_;
    double eps_ = 0.0;
    double delta_s_ = 0.0;
    Vec egrad_shift_;           // w with eta-hat = eta + w.U,  w = -eta_U(U-bar)
    double entropy_offset_ = 0.0;     // e is shifted so e(V-bar) = 0 (cosmetic)
    double entropy_flux_offset_ = 0.0;
    std::vector<double> flips_; // per-family orientation applied to r and l
    std::vector<FieldInfo> fields_;
};

/// Builds and validates a SystemDef from the raw description.  The entropy is
/// re-gauged by an affine shift so its V-gradient vanishes at the background;
/// all sampled invariants (entropy compatibility, strict hyperbolicity of the
/// averaged Jacobians, nondegenerate e_VV r r, unambiguous field kinds) are
/// checked on a lattice-plus-random sample of the ball, shrinking the ball by
/// halving (at most tol.max_eps_halvings times) until they hold.
SystemPtr make_system(RawSystem raw, Tolerances tol = default_tolerances());

/// The stored per-family classification (computed during make_system).
inline const std::vector<FieldInfo>& classify_fields(const SystemDef& sys) { return sys.fields(); }

/// Deterministic sample of the ball used by validation and calibration:
/// 3^m lattice aligned with the axes plus tol.ball_random_samples random
/// points, all inside the Euclidean ball.
std::vector<Vec> ball_samples(const SystemDef& sys);

} // namespace selfsim
