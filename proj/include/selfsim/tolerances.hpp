#pragma once

#include <cstdint>
#include <string>

namespace selfsim {

/// Central tolerance/knob record.  Every numerical threshold used by the
/// library lives here so a single override (or the SELFSIM_TOL_FILE JSON)
/// reaches all modules.
struct Tolerances {
    // linear algebra / eigen decompositions
    double eig_gap = 1e-8;        // minimum eigenvalue separation; also max imaginary part
    double eig_biortho = 1e-10;   // biorthonormality residual l^b r^a - delta_ab
    double eig_unit = 1e-12;      // right-eigenvector unit-length residual

    // root finding
    double newton_tol = 1e-12;    // absolute |F(x)| target
    int newton_max_iter = 50;
    double newton_fd_step = 1e-7; // forward-difference scale for Jacobians

    // quadrature
    double quad_tol = 1e-10;
    int quad_max_panels = 4096;

    // finite differences
    double fd_step = 1e-5;         // central-difference scale (first derivatives)
    double fd_hessian_step = 2.5e-4; // larger step: second differences lose
                                     // eps/h^2 to cancellation

    // system construction and sampling
    double entropy_pair_tol = 1e-6;   // hard EntropyPairMismatch threshold
    double entropy_pair_soft = 1e-8;  // sampled-invariant target
    double hessian_form_floor = 1e-10;
    double ld_threshold = 1e-8;       // |lambda_V . r| below which a sample reads as degenerate
    double roundtrip_tol = 1e-10;
    int ball_random_samples = 64;
    int pair_samples = 64;
    int max_eps_halvings = 6;

    // wave curves
    double rh_tol = 1e-9;             // Rankine-Hugoniot residual on constructed jumps
    double rh_loose = 1e-6;           // NotAJump threshold for externally supplied jumps
    double shock_step_fraction = 1.0 / 128.0; // continuation step = eps * fraction
    double hat_quad_tol = 1e-13;      // averaged-Jacobian quadrature
    double fan_invert_tol = 1e-11;
    int fan_steps_per_eps = 64;
    int min_rk4_steps = 16;
    int max_delta_l_halvings = 8;

    // riemann composition
    double riemann_tol = 1e-12;
    int riemann_max_iter = 25;

    // profiles, sectors, verification
    double contact_speed_tol = 1e-9;
    double resonance_tol = 1e-8;
    double weak_pass = 1e-7;
    double entropy_pass = 1e-9;
    double neighbourhood_slack = 0.9;
    double sector_safety = 1.10;
    double tv_refine_tol = 1e-8;
    int residual_pairs = 256;

    std::uint64_t seed = 12345;
};

/// Overlay values from a JSON document (only keys that are present are
/// applied).  Throws std::runtime_error on malformed input.
Tolerances tolerances_from_json_text(const std::string& text, Tolerances base = {});

/// Honors the SELFSIM_TOL_FILE environment variable if set; returns defaults
/// otherwise.
Tolerances default_tolerances();

} // namespace selfsim
