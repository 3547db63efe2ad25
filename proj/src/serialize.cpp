#include "selfsim/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "selfsim/errors.hpp"

namespace selfsim {

using nlohmann::json;

namespace {

json vec_to_json(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
    return a;
}

Vec vec_from_json(const json& a) {
    Vec v(static_cast<int>(a.size()));
    for (int i = 0; i < v.dim(); ++i) v[i] = a.at(static_cast<std::size_t>(i)).get<double>();
    return v;
}

void require_schema(const json& j, const char* type) {
    if (j.value("schema", "") != kSchemaTag)
        throw std::runtime_error(std::string("expected schema \"") + kSchemaTag + '"');
    if (j.value("type", "") != type)
        throw std::runtime_error(std::string("expected document type \"") + type + '"');
}

// CSV numbers: shortest representation that round-trips.
std::string fmt(double x) {
    char buf[32];
    snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

SystemConfig system_from_json_text(const std::string& text) {
    const json j = json::parse(text);
    require_schema(j, "system");
    if (j.value("model", "") != "euler")
        throw std::runtime_error("unsupported system model (only \"euler\" is file-loadable)");

    SystemConfig cfg;
    cfg.gamma = j.value("gamma", 1.4);
    cfg.law = PressureLaw::gamma_law(cfg.gamma);
    const json& bg = j.at("background");
    cfg.background = EulerState{bg.at("rho").get<double>(), bg.at("m").get<double>(),
                                bg.at("n").get<double>()};
    cfg.epsilon = j.at("epsilon").get<double>();

    Tolerances tol = default_tolerances();
    if (j.contains("tolerances")) tol = tolerances_from_json_text(j.at("tolerances").dump(), tol);
    if (j.contains("seed")) tol.seed = j.at("seed").get<std::uint64_t>();
    cfg.sys = make_euler_system(cfg.law, cfg.background, cfg.epsilon, tol);
    return cfg;
}

SystemConfig system_from_json_file(const std::string& path) {
    return system_from_json_text(read_text_file(path));
}

std::string system_to_json_text(const SystemConfig& config) {
    json j;
    j["schema"] = kSchemaTag;
    j["type"] = "system";
    j["model"] = "euler";
    j["gamma"] = config.gamma;
    j["background"] = {{"rho", config.background.rho},
                       {"m", config.background.m},
                       {"n", config.background.n}};
    j["epsilon"] = config.epsilon;
    return j.dump(2) + "\n";
}

EulerState state_from_json_file(const std::string& path) {
    const json j = json::parse(read_text_file(path));
    require_schema(j, "state");
    return EulerState{j.at("rho").get<double>(), j.at("m").get<double>(), j.at("n").get<double>()};
}

std::string state_to_json_text(const EulerState& state) {
    json j;
    j["schema"] = kSchemaTag;
    j["type"] = "state";
    j["rho"] = state.rho;
    j["m"] = state.m;
    j["n"] = state.n;
    return j.dump(2) + "\n";
}

std::string profile_to_json_text(const Profile& profile) {
    json j;
    j["schema"] = kSchemaTag;
    j["type"] = "profile";
    j["dim"] = profile.dim();
    j["halfplane"] = profile.halfplane() == Halfplane::XPos ? "x>0" : "x<0";
    j["breakpoints"] = profile.breakpoints();

    json pieces = json::array();
    for (const Piece& p : profile.pieces()) {
        json pj;
        if (p.type == PieceType::Constant) {
            pj["type"] = "constant";
            pj["value"] = vec_to_json(p.value);
        } else {
            pj["type"] = "fan";
            pj["family"] = p.fan->family + 1; // families are 1-based on disk
            pj["v_start"] = vec_to_json(p.fan->v_start);
            pj["strength"] = p.fan->strength;
            pj["xi_lo"] = p.fan->xi_lo;
            pj["xi_hi"] = p.fan->xi_hi;
            pj["xi_offset"] = p.fan->xi_offset;
        }
        pieces.push_back(pj);
    }
    j["pieces"] = pieces;

    json jumps = json::array();
    for (const Jump& jm : profile.jumps()) {
        json jj;
        jj["break_index"] = jm.break_index;
        jj["family"] = jm.family + 1;
        jj["kind"] = wave_kind_name(jm.kind);
        jj["v_minus"] = vec_to_json(jm.v_minus);
        jj["v_plus"] = vec_to_json(jm.v_plus);
        jumps.push_back(jj);
    }
    j["jumps"] = jumps;
    return j.dump(2) + "\n";
}

Profile profile_from_json_text(SystemPtr sys, const std::string& text, bool validate) {
    const json j = json::parse(text);
    require_schema(j, "profile");
    if (j.at("dim").get<int>() != sys->dim())
        throw std::runtime_error("profile dimension does not match the system");

    const Halfplane hp = j.at("halfplane").get<std::string>() == "x>0" ? Halfplane::XPos
                                                                       : Halfplane::XNeg;
    std::vector<double> breaks = j.at("breakpoints").get<std::vector<double>>();

    std::vector<Piece> pieces;
    for (const json& pj : j.at("pieces")) {
        Piece p;
        if (pj.at("type") == "constant") {
            p.type = PieceType::Constant;
            p.value = vec_from_json(pj.at("value"));
        } else {
            p.type = PieceType::Fan;
            FanPiece fp;
            fp.family = pj.at("family").get<int>() - 1;
            fp.v_start = vec_from_json(pj.at("v_start"));
            fp.strength = pj.at("strength").get<double>();
            fp.xi_lo = pj.at("xi_lo").get<double>();
            fp.xi_hi = pj.at("xi_hi").get<double>();
            fp.xi_offset = pj.value("xi_offset", 0.0);
            p.fan = fp;
        }
        pieces.push_back(std::move(p));
    }

    std::vector<Jump> jumps;
    for (const json& jj : j.at("jumps")) {
        Jump jm;
        jm.break_index = jj.at("break_index").get<int>();
        jm.family = jj.at("family").get<int>() - 1;
        const std::string kind = jj.at("kind").get<std::string>();
        jm.kind = kind == "contact" ? WaveKind::Contact : WaveKind::Shock;
        jm.v_minus = vec_from_json(jj.at("v_minus"));
        jm.v_plus = vec_from_json(jj.at("v_plus"));
        jumps.push_back(std::move(jm));
    }

    return Profile::assemble(std::move(sys), hp, std::move(breaks), std::move(pieces),
                             std::move(jumps), validate);
}

Profile profile_from_json_file(SystemPtr sys, const std::string& path, bool validate) {
    return profile_from_json_text(std::move(sys), read_text_file(path), validate);
}

std::string wave_to_json_text(const Wave& wave) {
    json j;
    j["schema"] = kSchemaTag;
    j["type"] = "wave";
    j["family"] = wave.family + 1;
    j["kind"] = wave_kind_name(wave.kind);
    j["v_minus"] = vec_to_json(wave.v_minus);
    j["v_plus"] = vec_to_json(wave.v_plus);
    j["strength"] = wave.strength;
    j["speed_lo"] = wave.speed_lo;
    j["speed_hi"] = wave.speed_hi;
    return j.dump(2) + "\n";
}

std::string saltus_to_json_text(const SaltusDecomposition& dec, const SectorLayout& layout,
                                double tv) {
    json j;
    j["schema"] = kSchemaTag;
    j["type"] = "saltus";
    json jumps = json::array();
    for (const SaltusJump& sj : dec.jumps()) {
        json e;
        e["xi"] = sj.xi;
        e["family"] = sj.family + 1;
        e["delta"] = vec_to_json(sj.delta);
        e["magnitude"] = sj.delta.norm();
        jumps.push_back(e);
    }
    j["jumps"] = jumps;
    j["sum_jump_magnitudes"] = dec.sum_jump_magnitudes();
    json per_family = json::array();
    for (const Sector& s : layout.sectors) {
        json e;
        e["family"] = s.family + 1;
        e["sum"] = dec.family_jump_sum(s.family);
        e["bound"] = layout.delta_l > 0.0 ? (2.0 * s.half_width) / (2.0 * layout.delta_l) : 0.0;
        per_family.push_back(e);
    }
    j["per_family"] = per_family;
    j["lipschitz_estimate"] = dec.lipschitz_estimate();
    j["total_variation"] = tv;
    return j.dump(2) + "\n";
}

std::string verify_report_to_json_text(const VerifyReport& report) {
    json j;
    j["schema"] = kSchemaTag;
    j["type"] = "report";
    j["pass"] = report.pass;
    j["weak"] = {{"max_residual", report.weak.max_residual},
                 {"worst_lo", report.weak.worst_lo},
                 {"worst_hi", report.weak.worst_hi},
                 {"n_pairs", report.weak.n_pairs}};
    j["entropy"] = {{"worst_violation", report.entropy.worst_violation},
                    {"satisfied", report.entropy.satisfied},
                    {"n_pairs", report.entropy.n_pairs}};
    json sectors = json::array();
    for (const SectorVerdict& v : report.structure.sectors) {
        json e;
        e["family"] = v.family + 1;
        e["orientation"] = v.forward ? "forward" : "backward";
        e["pass"] = v.pass;
        e["n_shocks"] = v.n_shocks;
        e["n_fans"] = v.n_fans;
        e["n_contacts"] = v.n_contacts;
        e["reasons"] = v.reasons;
        sectors.push_back(e);
    }
    j["structure"] = {{"pass", report.structure.pass},
                      {"sectors", sectors},
                      {"global_reasons", report.structure.global_reasons}};
    return j.dump(2) + "\n";
}

std::string profile_to_csv(const Profile& profile, int samples_per_piece) {
    std::ostringstream out;
    out << "# self-similar profile samples: xi = y/x (dimensionless ray slope),\n"
           "# V1..Vm = transformed state components at xi (right-continuous)\n";
    out << "xi";
    for (int i = 0; i < profile.dim(); ++i) out << ",V" << (i + 1);
    out << "\n";

    auto emit = [&](double xi, const Vec& v) {
        out << fmt(xi);
        for (int i = 0; i < v.dim(); ++i) out << ',' << fmt(v[i]);
        out << "\n";
    };

    const auto& breaks = profile.breakpoints();
    if (breaks.empty()) {
        emit(0.0, profile.evaluate(0.0));
        return out.str();
    }
    const double span = std::max(1e-6, breaks.back() - breaks.front());
    const double lo = breaks.front() - 0.25 * span;
    const double hi = breaks.back() + 0.25 * span;

    std::vector<double> cuts{lo};
    for (double b : breaks) cuts.push_back(b);
    cuts.push_back(hi);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        for (int k = 0; k < samples_per_piece; ++k) {
            const double xi = cuts[i] + (cuts[i + 1] - cuts[i]) * k / samples_per_piece;
            emit(xi, profile.evaluate(xi));
        }
    }
    emit(hi, profile.evaluate(hi));
    return out.str();
}

std::string curves_to_csv(const SystemDef& sys, int family, double s_lo, double s_hi, int n) {
    std::ostringstream out;
    const int m = sys.dim();
    out << "# wave curves from the background state: kind in {shock, simple},\n"
           "# s = curve parameter, V1..Vm = state, xi = wave speed (Hugoniot speed\n"
           "# for shocks, characteristic speed for simple waves), E = entropy\n"
           "# dissipation [q] - xi [e] (zero along simple waves)\n";
    out << "kind,s";
    for (int i = 0; i < m; ++i) out << ",V" << (i + 1);
    out << ",xi,E\n";

    const Vec base = sys.background();
    auto emit = [&](const char* kind, double s, const Vec& v, double xi, double e) {
        out << kind << ',' << fmt(s);
        for (int i = 0; i < m; ++i) out << ',' << fmt(v[i]);
        out << ',' << fmt(xi) << ',' << fmt(e) << "\n";
    };

    const bool gnl = sys.field(family).kind == FieldKind::GenuinelyNonlinear;
    for (int k = 0; k <= n; ++k) {
        const double s = s_lo + (s_hi - s_lo) * k / n;
        if (gnl) {
            const ShockPoint sp = shock_curve(sys, base, family, s);
            emit("shock", s, sp.v_plus, sp.xi, entropy_dissipation(sys, base, sp.v_plus, sp.xi));
            const Vec r = simple_wave_curve(sys, base, family, s);
            emit("simple", s, r, sys.eigenvalue(r, family), 0.0);
        } else {
            const Wave w = contact_wave(sys, base, family, s);
            emit("shock", s, w.v_plus, w.speed_lo,
                 entropy_dissipation(sys, base, w.v_plus, w.speed_lo));
            emit("simple", s, w.v_plus, w.speed_lo, 0.0);
        }
    }
    return out.str();
}

} // namespace selfsim
