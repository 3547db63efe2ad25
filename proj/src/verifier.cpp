#include "selfsim/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "selfsim/errors.hpp"
#include "selfsim/rng.hpp"

namespace selfsim {

namespace {

// Endpoint pairs for the integral identities: tight straddles of every
// breakpoint, interior pairs per piece, and wide spans; filled up to n with
// seeded random pairs.
std::vector<std::pair<double, double>> sample_pairs(const Profile& profile, int n) {
    const auto& breaks = profile.breakpoints();
    double lo, hi;
    if (breaks.empty()) {
        lo = -1.0;
        hi = 1.0;
    } else {
        const double span = std::max(1e-6, breaks.back() - breaks.front());
        lo = breaks.front() - 0.25 * span - 1e-3;
        hi = breaks.back() + 0.25 * span + 1e-3;
    }

    std::vector<std::pair<double, double>> pairs;
    Rng rng(profile.system()->tol().seed + 17);
    for (double b : breaks) {
        const double gap = 1e-6 * (1.0 + std::fabs(b));
        pairs.emplace_back(b - gap, b + gap);
        pairs.emplace_back(lo, b + gap);
        pairs.emplace_back(b - gap, hi);
    }
    pairs.emplace_back(lo, hi);
    while (static_cast<int>(pairs.size()) < n) {
        double a = rng.uniform(lo, hi);
        double b = rng.uniform(lo, hi);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        pairs.emplace_back(a, b);
    }
    if (static_cast<int>(pairs.size()) > n && n > 0) pairs.resize(static_cast<std::size_t>(n));
    return pairs;
}

template <typename F>
void for_each_pair(const std::vector<std::pair<double, double>>& pairs, int jobs, F&& body) {
    if (jobs <= 1) {
        for (std::size_t i = 0; i < pairs.size(); ++i) body(i);
        return;
    }
    std::vector<std::future<void>> futures;
    const std::size_t chunk = (pairs.size() + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
        const std::size_t begin = j * chunk;
        const std::size_t end = std::min(pairs.size(), begin + chunk);
        if (begin >= end) break;
        futures.push_back(std::async(std::launch::async, [&, begin, end] {
            for (std::size_t i = begin; i < end; ++i) body(i);
        }));
    }
    for (auto& f : futures) f.get();
}

} // namespace

ResidualReport weak_residual(const Profile& profile, int n_pairs, int jobs) {
    const SystemDef& sys = *profile.system();
    if (n_pairs <= 0) n_pairs = sys.tol().residual_pairs;
    const auto pairs = sample_pairs(profile, n_pairs);

    std::vector<double> residuals(pairs.size(), 0.0);
    for_each_pair(pairs, jobs, [&](std::size_t i) {
        const auto [a, b] = pairs[i];
        const Vec va = profile.evaluate(a);
        const Vec vb = profile.evaluate(b);
        const Vec bracket = (sys.flux(vb) - b * vb) - (sys.flux(va) - a * va);
        residuals[i] = (profile_integral(profile, a, b) + bracket).norm();
    });

    ResidualReport rep;
    rep.n_pairs = static_cast<int>(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (residuals[i] > rep.max_residual) {
            rep.max_residual = residuals[i];
            rep.worst_lo = pairs[i].first;
            rep.worst_hi = pairs[i].second;
        }
    }
    return rep;
}

EntropyReport entropy_residual(const Profile& profile, int n_pairs, int jobs) {
    return entropy_residual(profile, profile.halfplane(), n_pairs, jobs);
}

EntropyReport entropy_residual(const Profile& profile, Halfplane halfplane, int n_pairs, int jobs) {
    const SystemDef& sys = *profile.system();
    if (n_pairs <= 0) n_pairs = sys.tol().residual_pairs;
    const auto pairs = sample_pairs(profile, n_pairs);
    const double sign = (halfplane == Halfplane::XPos) ? 1.0 : -1.0;

    std::vector<double> violations(pairs.size(), 0.0);
    for_each_pair(pairs, jobs, [&](std::size_t i) {
        const auto [a, b] = pairs[i];
        const Vec va = profile.evaluate(a);
        const Vec vb = profile.evaluate(b);
        const double bracket = (sys.entropy_flux(vb) - b * sys.entropy(vb)) -
                               (sys.entropy_flux(va) - a * sys.entropy(va));
        // x > 0: bracket + integral of e must be <= 0; x < 0: >= 0
        violations[i] = sign * (bracket + profile_entropy_integral(profile, a, b));
    });

    EntropyReport rep;
    rep.n_pairs = static_cast<int>(pairs.size());
    rep.worst_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (violations[i] > rep.worst_violation) {
            rep.worst_violation = violations[i];
            rep.worst_lo = pairs[i].first;
            rep.worst_hi = pairs[i].second;
        }
    }
    rep.satisfied = rep.worst_violation <= sys.tol().entropy_pass;
    return rep;
}

namespace {

struct WaveRef {
    enum Type { JumpWave, FanWave } type;
    int index;        // jump index or piece index
    double lo, hi;    // speed range (equal for jumps)
};

std::vector<WaveRef> waves_in_sector(const Profile& profile, const Sector& sector) {
    std::vector<WaveRef> out;
    const auto& breaks = profile.breakpoints();
    for (std::size_t j = 0; j < profile.jumps().size(); ++j) {
        const double xi = breaks[static_cast<std::size_t>(profile.jumps()[j].break_index)];
        if (sector.contains(xi)) out.push_back({WaveRef::JumpWave, static_cast<int>(j), xi, xi});
    }
    const auto& pieces = profile.pieces();
    for (std::size_t p = 0; p < pieces.size(); ++p) {
        if (pieces[p].type != PieceType::Fan) continue;
        const double lo = breaks[p - 1], hi = breaks[p];
        if (sector.contains(0.5 * (lo + hi)) || sector.contains(lo) || sector.contains(hi))
            out.push_back({WaveRef::FanWave, static_cast<int>(p), lo, hi});
    }
    std::sort(out.begin(), out.end(), [](const WaveRef& a, const WaveRef& b) { return a.lo < b.lo; });
    return out;
}

} // namespace

StructureReport classify_structure(const SectorLayout& layout, const Profile& profile) {
    const SystemDef& sys = *profile.system();
    const Tolerances& tol = sys.tol();
    const auto& breaks = profile.breakpoints();
    StructureReport rep;

    // everything outside the sectors must be constant: no wave may sit there
    for (const Jump& j : profile.jumps()) {
        const double xi = breaks[static_cast<std::size_t>(j.break_index)];
        if (layout.sector_of(xi) < 0) {
            rep.pass = false;
            rep.global_reasons.push_back("WaveOutsideSectors");
            break;
        }
    }
    for (std::size_t p = 0; p < profile.pieces().size() && rep.global_reasons.empty(); ++p) {
        if (profile.pieces()[p].type != PieceType::Fan) continue;
        const double lo = breaks[p - 1], hi = breaks[p];
        if (layout.sector_of(lo) != layout.sector_of(hi) || layout.sector_of(lo) < 0) {
            rep.pass = false;
            rep.global_reasons.push_back("WaveOutsideSectors");
        }
    }

    for (const Sector& sector : layout.sectors) {
        SectorVerdict verdict;
        verdict.family = sector.family;
        verdict.forward = (profile.halfplane() == sector.forward_halfplane);
        const auto waves = waves_in_sector(profile, sector);

        for (const WaveRef& w : waves) {
            if (w.type == WaveRef::JumpWave) {
                const Jump& j = profile.jumps()[static_cast<std::size_t>(w.index)];
                const double xi = w.lo;
                if (rh_residual(sys, j.v_minus, j.v_plus, xi) > tol.rh_tol) {
                    verdict.pass = false;
                    verdict.reasons.push_back("RankineHugoniotViolated");
                }
                const double lam_minus = sys.eigenvalue(j.v_minus, sector.family);
                const double lam_plus = sys.eigenvalue(j.v_plus, sector.family);
                const bool contact_like = std::fabs(lam_minus - xi) <= tol.resonance_tol &&
                                          std::fabs(lam_plus - xi) <= tol.resonance_tol;
                if (sector.kind == FieldKind::LinearlyDegenerate) {
                    ++verdict.n_contacts;
                    if (!contact_like) {
                        verdict.pass = false;
                        verdict.reasons.push_back("ContactSpeedMismatch");
                    }
                } else {
                    ++verdict.n_shocks;
                }
            } else {
                const Piece& piece = profile.pieces()[static_cast<std::size_t>(w.index)];
                ++verdict.n_fans;
                if (sector.kind == FieldKind::LinearlyDegenerate) {
                    verdict.pass = false;
                    verdict.reasons.push_back("FanInLDSector");
                } else if (piece.fan->family != sector.family) {
                    verdict.pass = false;
                    verdict.reasons.push_back("WrongFamilyFan");
                }
            }
        }

        if (sector.kind == FieldKind::LinearlyDegenerate) {
            if (verdict.n_contacts > 1) {
                verdict.pass = false;
                verdict.reasons.push_back("MultipleContacts");
            }
        } else if (verdict.forward) {
            if (verdict.n_shocks + verdict.n_fans > 1) {
                verdict.pass = false;
                verdict.reasons.push_back("MultipleForwardWaves");
            }
            for (const WaveRef& w : waves) {
                if (w.type != WaveRef::JumpWave) continue;
                const Jump& j = profile.jumps()[static_cast<std::size_t>(w.index)];
                Wave shock;
                shock.family = sector.family;
                shock.kind = WaveKind::Shock;
                shock.v_minus = j.v_minus;
                shock.v_plus = j.v_plus;
                shock.speed_lo = shock.speed_hi = w.lo;
                const LaxReport lax = lax_check(sys, shock, LaxDirection::Forward,
                                                tol.neighbourhood_slack * layout.delta_l);
                if (!lax.satisfied) {
                    verdict.pass = false;
                    verdict.reasons.push_back("InadmissibleShock");
                }
            }
        } else {
            // backward sector: uniform Lax margin per shock, proportional
            // constant neighbourhoods, no adjacent simple waves
            for (std::size_t wi = 0; wi < waves.size(); ++wi) {
                const WaveRef& w = waves[wi];
                if (w.type == WaveRef::FanWave) {
                    if (wi + 1 < waves.size() && waves[wi + 1].type == WaveRef::FanWave) {
                        verdict.pass = false;
                        verdict.reasons.push_back("ConsecutiveSimpleWaves");
                    }
                    continue;
                }
                const Jump& j = profile.jumps()[static_cast<std::size_t>(w.index)];
                Wave shock;
                shock.family = sector.family;
                shock.kind = WaveKind::Shock;
                shock.v_minus = j.v_minus;
                shock.v_plus = j.v_plus;
                shock.speed_lo = shock.speed_hi = w.lo;
                const LaxReport lax = lax_check(sys, shock, LaxDirection::Backward,
                                                tol.neighbourhood_slack * layout.delta_l);
                if (!lax.satisfied) {
                    verdict.pass = false;
                    verdict.reasons.push_back("InadmissibleShock");
                }

                // constant neighbourhoods of length >= slack * delta_l * |[V]|
                const double need =
                    tol.neighbourhood_slack * layout.delta_l * j.delta().norm();
                const double prev_edge = (wi == 0) ? sector.lo() : waves[wi - 1].hi;
                const double next_edge = (wi + 1 == waves.size()) ? sector.hi() : waves[wi + 1].lo;
                if (w.lo - prev_edge < need || next_edge - w.hi < need) {
                    verdict.pass = false;
                    verdict.reasons.push_back("NeighbourhoodTooSmall");
                }
            }
        }

        if (!verdict.pass) rep.pass = false;
        rep.sectors.push_back(std::move(verdict));
    }
    return rep;
}

VerifyReport verify_profile(const SectorLayout& layout, const Profile& profile, int n_pairs,
                            int jobs) {
    VerifyReport rep;
    rep.weak = weak_residual(profile, n_pairs, jobs);
    rep.entropy = entropy_residual(profile, n_pairs, jobs);
    rep.structure = classify_structure(layout, profile);
    const Tolerances& tol = profile.system()->tol();
    rep.pass = rep.weak.max_residual <= tol.weak_pass && rep.entropy.satisfied &&
               rep.structure.pass;
    return rep;
}

double lipschitz_at_resonance(const SectorLayout& layout, const Profile& profile, double xi0) {
    const SystemDef& sys = *profile.system();
    const Tolerances& tol = sys.tol();
    const Vec v0 = profile.evaluate(xi0);

    int family = -1;
    const Vec lam = sys.eigenvalues(v0);
    for (int a = 0; a < sys.dim(); ++a)
        if (std::fabs(lam[a] - xi0) <= tol.resonance_tol) family = a;
    if (family < 0) raise(Errc::NotResonant, "no characteristic speed matches xi at this point");

    const Sector* sector = nullptr;
    for (const Sector& s : layout.sectors)
        if (s.family == family) sector = &s;
    if (!sector || !sector->contains(xi0))
        raise(Errc::NotResonant, "resonance point lies outside its family sector");

    // sample the sector, skipping the jump positions themselves
    const auto& breaks = profile.breakpoints();
    double quotient = 0.0;
    const int n = 512;
    for (int k = 0; k <= n; ++k) {
        const double xi = sector->lo() + (sector->hi() - sector->lo()) * k / n;
        if (std::fabs(xi - xi0) < 1e-12) continue;
        bool at_jump = false;
        for (const Jump& j : profile.jumps())
            if (std::fabs(breaks[static_cast<std::size_t>(j.break_index)] - xi) < 1e-12)
                at_jump = true;
        if (at_jump) continue;
        quotient = std::max(quotient, (profile.evaluate(xi) - v0).norm() / std::fabs(xi - xi0));
    }
    return quotient;
}

} // namespace selfsim
