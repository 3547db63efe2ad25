#include "selfsim/cli.hpp"

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "selfsim/errors.hpp"
#include "selfsim/serialize.hpp"

namespace selfsim {

namespace {

struct CommonArgs {
    std::string system_path;
};

Halfplane parse_halfplane(const std::string& s) {
    if (s == "x>0") return Halfplane::XPos;
    if (s == "x<0") return Halfplane::XNeg;
    throw CLI::ValidationError("--halfplane", "must be 'x>0' or 'x<0'");
}

void print_sector_table(const SystemConfig& cfg, const SectorLayout& layout) {
    std::printf("family  kind      orientation  center         half-width     interval\n");
    for (const Sector& s : layout.sectors) {
        std::printf("%-7d %-9s %-12s %+.8f    %.8f     (%+.8f, %+.8f)\n", s.family + 1,
                    s.kind == FieldKind::LinearlyDegenerate ? "contact" : "nonlinear",
                    s.forward_halfplane == Halfplane::XPos ? "forward:x>0" : "forward:x<0",
                    s.center, s.half_width, s.lo(), s.hi());
    }
    std::printf("delta_s = %.8e\n", layout.delta_s);
    std::printf("delta_L = %.8e\n", layout.delta_l);
    const double mach = cfg.background.mach(cfg.law);
    if (mach > 1.0) {
        const MachGeometry g = mach_geometry(mach);
        std::printf("Mach angle = %.7f rad (M = %g)\n", g.mu, mach);
    }
}

void print_verify_report(const VerifyReport& rep) {
    std::printf("weak residual      max = %.3e (pairs: %d)\n", rep.weak.max_residual,
                rep.weak.n_pairs);
    std::printf("entropy inequality worst violation = %+.3e  [%s]\n", rep.entropy.worst_violation,
                rep.entropy.satisfied ? "ok" : "VIOLATED");
    std::printf("structure          %s\n", rep.structure.pass ? "ok" : "FAIL");
    for (const SectorVerdict& v : rep.structure.sectors) {
        std::printf("  sector %d (%s): %s  shocks=%d fans=%d contacts=%d", v.family + 1,
                    v.forward ? "forward" : "backward", v.pass ? "PASS" : "FAIL", v.n_shocks,
                    v.n_fans, v.n_contacts);
        for (const std::string& r : v.reasons) std::printf(" %s", r.c_str());
        std::printf("\n");
    }
    for (const std::string& r : rep.structure.global_reasons) std::printf("  global: %s\n", r.c_str());
    std::printf("verdict: %s\n", rep.pass ? "PASS" : "FAIL");
}

int generate_preset(const SystemConfig& cfg, const std::string& preset, int n, double strength,
                    int family_flag, const std::string& out_path) {
    const SystemDef& sys = *cfg.sys;
    const SectorLayout layout = sector_layout(sys);
    const double eps = sys.ball_radius();

    // default families: last (fastest) genuinely nonlinear family, first
    // linearly degenerate family for contacts
    int gnl_family = -1, ld_family = -1;
    for (const FieldInfo& f : sys.fields()) {
        if (f.kind == FieldKind::GenuinelyNonlinear) gnl_family = f.family;
        if (f.kind == FieldKind::LinearlyDegenerate && ld_family < 0) ld_family = f.family;
    }

    Profile profile = [&]() -> Profile {
        if (preset == "forward-shock") {
            const int fam = family_flag >= 0 ? family_flag : gnl_family;
            const double s = strength != 0.0 ? strength : -eps / 8.0;
            return generate_forward(cfg.sys, layout, fam, WaveKind::Shock, s);
        }
        if (preset == "forward-fan") {
            const int fam = family_flag >= 0 ? family_flag : gnl_family;
            const double s = strength != 0.0 ? strength : eps / 8.0;
            return generate_forward(cfg.sys, layout, fam, WaveKind::SimpleWave, s);
        }
        if (preset == "contact") {
            const int fam = family_flag >= 0 ? family_flag : ld_family;
            const double s = strength != 0.0 ? strength : eps / 8.0;
            return generate_forward(cfg.sys, layout, fam, WaveKind::Contact, s);
        }
        if (preset == "backward-shocks") {
            const int fam = family_flag >= 0 ? family_flag : gnl_family;
            const int count = n > 0 ? n : 5;
            const double s = strength != 0.0 ? strength : eps / (8.0 * count);
            return generate_backward_shocks(cfg.sys, layout, fam, count, s);
        }
        if (preset == "backward-mixed") {
            const int fam = family_flag >= 0 ? family_flag : gnl_family;
            const int count = n > 0 ? n : 3;
            const double s = strength != 0.0 ? strength : eps / (16.0 * count);
            std::vector<BackwardItem> items;
            for (int i = 0; i < count; ++i) {
                items.push_back(BackwardShock{s});
                if (i + 1 < count) items.push_back(BackwardCompression{0.5 * s});
            }
            return generate_backward(cfg.sys, layout, fam, items);
        }
        if (preset == "backward-geometric") {
            const int fam = family_flag >= 0 ? family_flag : gnl_family;
            const int count = n > 0 ? n : 20;
            const double s0 = strength != 0.0 ? strength : eps / 8.0;
            std::vector<BackwardItem> items;
            for (int i = 1; i <= count; ++i)
                items.push_back(BackwardShock{s0 * std::pow(2.0, -i)});
            return generate_backward(cfg.sys, layout, fam, items);
        }
        throw CLI::ValidationError("--preset",
                                   "unknown preset (forward-shock, forward-fan, contact, "
                                   "backward-shocks, backward-mixed, backward-geometric)");
    }();

    write_text_file(out_path, profile_to_json_text(profile));
    std::printf("wrote %s (%zu breakpoints, %zu jumps)\n", out_path.c_str(),
                profile.breakpoints().size(), profile.jumps().size());
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"steady self-similar conservation-law profiles: wave curves, Riemann "
                 "solutions, verification and fixtures"};
    app.require_subcommand(1);

    std::string system_path, profile_path, out_path, left_path, right_path;
    std::string halfplane_str, s_range, preset;
    int family_flag = 0, n_flag = 0, pairs = 0, jobs = 1, samples = 128;
    double strength = 0.0;
    std::uint64_t seed = 0;

    auto* curves = app.add_subcommand("curves", "tabulate shock and simple-wave curves to CSV");
    curves->add_option("--system", system_path)->required();
    curves->add_option("--family", family_flag, "family index, 1-based")->required();
    curves->add_option("--s-range", s_range, "curve parameter range a:b")->required();
    curves->add_option("--n", samples, "samples per curve");
    curves->add_option("--out", out_path)->required();

    auto* solve = app.add_subcommand("solve", "solve a small-data Riemann problem");
    solve->add_option("--system", system_path)->required();
    solve->add_option("--left", left_path, "state at xi -> -inf (JSON)")->required();
    solve->add_option("--right", right_path, "state at xi -> +inf (JSON)")->required();
    solve->add_option("--halfplane", halfplane_str)->default_val("x>0");
    solve->add_option("--out", out_path)->required();

    auto* verify = app.add_subcommand("verify", "verify a profile (exit 0 = PASS, 2 = FAIL)");
    verify->add_option("--system", system_path)->required();
    verify->add_option("--profile", profile_path)->required();
    verify->add_option("--halfplane", halfplane_str, "override the profile's halfplane tag");
    verify->add_option("--pairs", pairs, "endpoint pairs per residual check");
    verify->add_option("--jobs", jobs, "parallel workers for residual sampling");
    verify->add_option("--out", out_path, "write the JSON report here");

    auto* classify = app.add_subcommand("classify", "structural verdict per sector");
    classify->add_option("--system", system_path)->required();
    classify->add_option("--profile", profile_path)->required();

    auto* generate = app.add_subcommand("generate", "emit a fixture profile");
    generate->add_option("--system", system_path)->required();
    generate->add_option("--preset", preset)->required();
    generate->add_option("--n", n_flag, "wave count for multi-wave presets");
    generate->add_option("--seed", seed, "sampling seed override");
    generate->add_option("--family", family_flag, "family index, 1-based (default per preset)");
    generate->add_option("--strength", strength, "wave strength override");
    generate->add_option("--out", out_path)->required();

    auto* decompose = app.add_subcommand("decompose", "saltus/Lipschitz split of a profile");
    decompose->add_option("--system", system_path)->required();
    decompose->add_option("--profile", profile_path)->required();
    decompose->add_option("--out", out_path)->required();

    auto* sectors = app.add_subcommand("sectors", "print the wave-sector layout");
    sectors->add_option("--system", system_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (curves->parsed()) {
            const SystemConfig cfg = system_from_json_file(system_path);
            const auto colon = s_range.find(':');
            if (colon == std::string::npos)
                throw std::runtime_error("--s-range must have the form a:b");
            const double lo = std::stod(s_range.substr(0, colon));
            const double hi = std::stod(s_range.substr(colon + 1));
            write_text_file(out_path,
                            curves_to_csv(*cfg.sys, family_flag - 1, lo, hi, samples));
            std::printf("wrote %s\n", out_path.c_str());
            return 0;
        }

        if (solve->parsed()) {
            const SystemConfig cfg = system_from_json_file(system_path);
            const Halfplane hp = parse_halfplane(halfplane_str);
            const EulerState left = state_from_json_file(left_path);
            const EulerState right = state_from_json_file(right_path);
            const EulerState& upper = hp == Halfplane::XPos ? right : left;
            const EulerState& lower = hp == Halfplane::XPos ? left : right;
            const RiemannSolution sol = steady_riemann_2d(cfg.sys, upper, lower, hp);
            write_text_file(out_path, profile_to_json_text(sol.profile));
            std::printf("strengths:");
            for (int a = 0; a < sol.strengths.dim(); ++a)
                std::printf(" s%d=%+.12e", a + 1, sol.strengths[a]);
            std::printf("\niterations: %d\nwrote %s\n", sol.iterations, out_path.c_str());
            return 0;
        }

        if (verify->parsed()) {
            const SystemConfig cfg = system_from_json_file(system_path);
            Profile profile = profile_from_json_file(cfg.sys, profile_path, false);
            const SectorLayout layout = sector_layout(*cfg.sys);
            VerifyReport rep;
            if (!halfplane_str.empty()) {
                rep.weak = weak_residual(profile, pairs, jobs);
                rep.entropy = entropy_residual(profile, parse_halfplane(halfplane_str), pairs, jobs);
                rep.structure = classify_structure(layout, profile);
                rep.pass = rep.weak.max_residual <= cfg.sys->tol().weak_pass &&
                           rep.entropy.satisfied && rep.structure.pass;
            } else {
                rep = verify_profile(layout, profile, pairs, jobs);
            }
            print_verify_report(rep);
            if (!out_path.empty()) write_text_file(out_path, verify_report_to_json_text(rep));
            return rep.pass ? 0 : 2;
        }

        if (classify->parsed()) {
            const SystemConfig cfg = system_from_json_file(system_path);
            Profile profile = profile_from_json_file(cfg.sys, profile_path, false);
            const SectorLayout layout = sector_layout(*cfg.sys);
            const StructureReport rep = classify_structure(layout, profile);
            for (const SectorVerdict& v : rep.sectors) {
                std::printf("sector %d (%s): %s  shocks=%d fans=%d contacts=%d", v.family + 1,
                            v.forward ? "forward" : "backward", v.pass ? "PASS" : "FAIL",
                            v.n_shocks, v.n_fans, v.n_contacts);
                for (const std::string& r : v.reasons) std::printf(" %s", r.c_str());
                std::printf("\n");
            }
            for (const std::string& r : rep.global_reasons) std::printf("global: %s\n", r.c_str());
            return rep.pass ? 0 : 2;
        }

        if (generate->parsed()) {
            SystemConfig cfg;
            {
                // allow a seed override without editing the system file
                std::string text = read_text_file(system_path);
                cfg = system_from_json_text(text);
                if (seed != 0) {
                    Tolerances tol = cfg.sys->tol();
                    tol.seed = seed;
                    cfg.sys = make_euler_system(cfg.law, cfg.background, cfg.epsilon, tol);
                }
            }
            return generate_preset(cfg, preset, n_flag, strength,
                                   family_flag > 0 ? family_flag - 1 : -1, out_path);
        }

        if (decompose->parsed()) {
            const SystemConfig cfg = system_from_json_file(system_path);
            Profile profile = profile_from_json_file(cfg.sys, profile_path, false);
            const SectorLayout layout = sector_layout(*cfg.sys);
            const SaltusDecomposition dec = saltus_decompose(profile);
            const double tv = total_variation(profile);
            write_text_file(out_path, saltus_to_json_text(dec, layout, tv));
            std::printf("jumps: %zu, sum |[V]| = %.12e, TV = %.12e, Lipschitz estimate = %.6e\n",
                        dec.jumps().size(), dec.sum_jump_magnitudes(), tv,
                        dec.lipschitz_estimate());
            std::printf("wrote %s\n", out_path.c_str());
            return 0;
        }

        if (sectors->parsed()) {
            const SystemConfig cfg = system_from_json_file(system_path);
            const SectorLayout layout = sector_layout(*cfg.sys);
            print_sector_table(cfg, layout);
            return 0;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical failure [%s]: %s\n", e.name(), e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}

} // namespace selfsim
