#include "selfsim/tolerances.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace selfsim {

namespace {

template <typename T>
void maybe(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

} // namespace

Tolerances tolerances_from_json_text(const std::string& text, Tolerances base) {
    nlohmann::json j = nlohmann::json::parse(text);
    Tolerances t = base;
    maybe(j, "eig_gap", t.eig_gap);
    maybe(j, "eig_biortho", t.eig_biortho);
    maybe(j, "eig_unit", t.eig_unit);
    maybe(j, "newton_tol", t.newton_tol);
    maybe(j, "newton_max_iter", t.newton_max_iter);
    maybe(j, "newton_fd_step", t.newton_fd_step);
    maybe(j, "quad_tol", t.quad_tol);
    maybe(j, "quad_max_panels", t.quad_max_panels);
    maybe(j, "fd_step", t.fd_step);
    maybe(j, "fd_hessian_step", t.fd_hessian_step);
    maybe(j, "entropy_pair_tol", t.entropy_pair_tol);
    maybe(j, "entropy_pair_soft", t.entropy_pair_soft);
    maybe(j, "hessian_form_floor", t.hessian_form_floor);
    maybe(j, "ld_threshold", t.ld_threshold);
    maybe(j, "roundtrip_tol", t.roundtrip_tol);
    maybe(j, "ball_random_samples", t.ball_random_samples);
    maybe(j, "pair_samples", t.pair_samples);
    maybe(j, "max_eps_halvings", t.max_eps_halvings);
    maybe(j, "rh_tol", t.rh_tol);
    maybe(j, "rh_loose", t.rh_loose);
    maybe(j, "shock_step_fraction", t.shock_step_fraction);
    maybe(j, "hat_quad_tol", t.hat_quad_tol);
    maybe(j, "fan_invert_tol", t.fan_invert_tol);
    maybe(j, "fan_steps_per_eps", t.fan_steps_per_eps);
    maybe(j, "min_rk4_steps", t.min_rk4_steps);
    maybe(j, "max_delta_l_halvings", t.max_delta_l_halvings);
    maybe(j, "riemann_tol", t.riemann_tol);
    maybe(j, "riemann_max_iter", t.riemann_max_iter);
    maybe(j, "contact_speed_tol", t.contact_speed_tol);
    maybe(j, "resonance_tol", t.resonance_tol);
    maybe(j, "weak_pass", t.weak_pass);
    maybe(j, "entropy_pass", t.entropy_pass);
    maybe(j, "neighbourhood_slack", t.neighbourhood_slack);
    maybe(j, "sector_safety", t.sector_safety);
    maybe(j, "tv_refine_tol", t.tv_refine_tol);
    maybe(j, "residual_pairs", t.residual_pairs);
    maybe(j, "seed", t.seed);
    return t;
}

Tolerances default_tolerances() {
    Tolerances t;
    if (const char* path = std::getenv("SELFSIM_TOL_FILE")) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error(std::string("cannot open SELFSIM_TOL_FILE: ") + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        t = tolerances_from_json_text(ss.str(), t);
    }
    return t;
}

} // namespace selfsim
