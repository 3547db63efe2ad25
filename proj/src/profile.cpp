#include "selfsim/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "selfsim/errors.hpp"

namespace selfsim {

int Profile::piece_index(double xi) const {
    return static_cast<int>(std::upper_bound(breaks_.begin(), breaks_.end(), xi) - breaks_.begin());
}

Vec Profile::eval_piece(int idx, double xi) const {
    const Piece& p = pieces_[static_cast<std::size_t>(idx)];
    if (p.type == PieceType::Constant) return p.value;
    return p.fan->fan->at(xi - p.fan->xi_offset);
}

Vec Profile::evaluate(double xi) const { return eval_piece(piece_index(xi), xi); }

Vec Profile::left_limit(double xi) const {
    const int idx =
        static_cast<int>(std::lower_bound(breaks_.begin(), breaks_.end(), xi) - breaks_.begin());
    return eval_piece(idx, xi);
}

const Jump* Profile::jump_at(int break_index) const {
    for (const Jump& j : jumps_)
        if (j.break_index == break_index) return &j;
    return nullptr;
}

std::pair<double, double> Profile::support() const {
    if (breaks_.empty()) return {0.0, 0.0};
    return {breaks_.front(), breaks_.back()};
}

ProfileBuilder::ProfileBuilder(SystemPtr sys, Halfplane halfplane, Vec v_left)
    : sys_(std::move(sys)), halfplane_(halfplane), current_(std::move(v_left)),
      cursor_(-std::numeric_limits<double>::infinity()) {}

ProfileBuilder& ProfileBuilder::add_jump(double xi, int family, WaveKind kind, const Vec& v_plus) {
    if (!(xi > cursor_)) raise(Errc::DoesNotFit, "jump position does not advance the profile");
    breaks_.push_back(xi);
    Piece before;
    before.type = PieceType::Constant;
    before.value = current_;
    pieces_.push_back(before);

    Jump j;
    j.break_index = static_cast<int>(breaks_.size()) - 1;
    j.family = family;
    j.kind = kind;
    j.v_minus = current_;
    j.v_plus = v_plus;
    jumps_.push_back(j);

    current_ = v_plus;
    cursor_ = xi;
    return *this;
}

ProfileBuilder& ProfileBuilder::add_fan(int family, double strength) {
    auto fan = std::make_shared<WaveFan>(sys_, current_, family, strength);
    if (!(fan->xi_lo() > cursor_))
        raise(Errc::DoesNotFit, "fan start does not advance the profile");

    FanPiece piece;
    piece.family = family;
    piece.v_start = current_;
    piece.strength = strength;
    piece.xi_lo = fan->xi_lo();
    piece.xi_hi = fan->xi_hi();
    piece.xi_offset = 0.0;
    piece.fan = fan;

    const Vec end_state = fan->v_plus();
    return add_fan_raw(piece, end_state);
}

ProfileBuilder& ProfileBuilder::add_fan_raw(const FanPiece& piece, const Vec& end_state) {
    if (!(piece.xi_lo > cursor_)) raise(Errc::DoesNotFit, "fan start does not advance the profile");
    if (!(piece.xi_hi > piece.xi_lo)) raise(Errc::DoesNotFit, "fan range is empty");

    Piece before;
    before.type = PieceType::Constant;
    before.value = current_;
    pieces_.push_back(before);
    breaks_.push_back(piece.xi_lo);

    Piece fanpiece;
    fanpiece.type = PieceType::Fan;
    fanpiece.fan = piece;
    if (!fanpiece.fan->fan)
        fanpiece.fan->fan = std::make_shared<WaveFan>(sys_, piece.v_start, piece.family, piece.strength);
    pieces_.push_back(fanpiece);
    breaks_.push_back(piece.xi_hi);

    current_ = end_state;
    cursor_ = piece.xi_hi;
    return *this;
}

namespace {

void validate_profile(const Profile& p) {
    const SystemDef& sys = *p.system();
    const Tolerances& tol = sys.tol();
    const auto& breaks = p.breakpoints();
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (!(breaks[i] < breaks[i + 1]))
            raise(Errc::DoesNotFit, "breakpoints not strictly increasing");
    if (p.pieces().size() != breaks.size() + 1)
        raise(Errc::DoesNotFit, "piece count must be breakpoints + 1");

    for (const Piece& piece : p.pieces()) {
        if (piece.type == PieceType::Constant) {
            if (!sys.in_ball(piece.value)) raise(Errc::OutOfBall, "constant piece outside ball");
        } else if (piece.fan->xi_offset != 0.0) {
            raise(Errc::DoesNotFit, "fan detached from its characteristic range");
        }
    }

    // right-continuity bookkeeping: at a jump the stored right state must be
    // the next piece's value; elsewhere the pieces must be continuous
    for (std::size_t b = 0; b < breaks.size(); ++b) {
        const double xi = breaks[b];
        const Vec right = p.evaluate(xi);
        const Vec left = p.left_limit(xi);
        if (const Jump* j = p.jump_at(static_cast<int>(b))) {
            if ((j->v_minus - left).norm_inf() > 1e-12 + 1e-12 * left.norm_inf())
                raise(Errc::DoesNotFit, "jump left state disagrees with the profile");
            if ((j->v_plus - right).norm_inf() > 1e-12 + 1e-12 * right.norm_inf())
                raise(Errc::DoesNotFit, "jump right state disagrees with the profile");
            const double res = rh_residual(sys, j->v_minus, j->v_plus, xi);
            if (res > tol.rh_tol)
                raise(Errc::NotAJump, "profile jump violates Rankine-Hugoniot");
        } else {
            if ((right - left).norm_inf() > 1e-10 + 1e-10 * right.norm_inf())
                raise(Errc::DoesNotFit, "discontinuity without a recorded jump");
        }
    }
}

} // namespace

Profile Profile::assemble(SystemPtr sys, Halfplane halfplane, std::vector<double> breaks,
                          std::vector<Piece> pieces, std::vector<Jump> jumps, bool validate) {
    Profile p;
    p.sys_ = std::move(sys);
    p.halfplane_ = halfplane;
    p.breaks_ = std::move(breaks);
    p.pieces_ = std::move(pieces);
    p.jumps_ = std::move(jumps);
    for (Piece& piece : p.pieces_) {
        if (piece.type == PieceType::Fan && !piece.fan->fan)
            piece.fan->fan = std::make_shared<WaveFan>(p.sys_, piece.fan->v_start, piece.fan->family,
                                                       piece.fan->strength);
    }
    if (validate) validate_profile(p);
    return p;
}

Profile ProfileBuilder::finish(bool validate) {
    if (finished_) raise(Errc::DoesNotFit, "builder already finished");
    finished_ = true;

    Piece last;
    last.type = PieceType::Constant;
    last.value = current_;
    pieces_.push_back(last);

    return Profile::assemble(sys_, halfplane_, std::move(breaks_), std::move(pieces_),
                             std::move(jumps_), validate);
}

Profile profile_from_waves(SystemPtr sys, Halfplane halfplane, const Vec& v_left,
                           const std::vector<Wave>& waves, bool validate) {
    ProfileBuilder b(sys, halfplane, v_left);
    const double tiny = 1e-12;
    for (const Wave& w : waves) {
        if (std::fabs(w.strength) <= tiny && w.jump().norm() <= tiny) continue;
        switch (w.kind) {
            case WaveKind::Shock:
            case WaveKind::Contact:
                b.add_jump(w.speed_lo, w.family, w.kind, w.v_plus);
                break;
            case WaveKind::SimpleWave:
                b.add_fan(w.family, w.strength);
                break;
        }
    }
    return b.finish(validate);
}

int SectorLayout::sector_of(double xi) const {
    for (std::size_t i = 0; i < sectors.size(); ++i)
        if (sectors[i].contains(xi)) return static_cast<int>(i);
    return -1;
}

SectorLayout sector_layout(const SystemDef& sys) {
    const int m = sys.dim();
    const Vec lam_bar = sys.eigenvalues(sys.background());
    const std::vector<Vec> samples = ball_samples(sys);

    SectorLayout layout;
    layout.delta_s = sys.spectral_slack();
    for (int a = 0; a < m; ++a) {
        double spread = 0.0;
        for (const Vec& v : samples)
            spread = std::max(spread, std::fabs(sys.eigenvalue(v, a) - lam_bar[a]));
        Sector s;
        s.family = a;
        s.center = lam_bar[a];
        s.half_width = sys.tol().sector_safety * (layout.delta_s + spread);
        s.kind = sys.field(a).kind;
        s.forward_halfplane = sys.field(a).forward_halfplane;
        layout.sectors.push_back(s);
    }
    for (int a = 0; a + 1 < m; ++a) {
        if (!(layout.sectors[a].hi() < layout.sectors[a + 1].lo()))
            raise(Errc::SectorsOverlap, "sector intervals overlap; shrink the ball radius");
    }
    layout.delta_l = calibrate_delta_l(sys);
    return layout;
}

SaltusDecomposition::SaltusDecomposition(Profile profile, std::vector<SaltusJump> jumps,
                                         double lipschitz)
    : profile_(std::move(profile)), jumps_(std::move(jumps)), lipschitz_(lipschitz) {}

Vec SaltusDecomposition::v_s(double xi) const {
    Vec acc(profile_.dim());
    for (const SaltusJump& j : jumps_) {
        if (j.xi <= xi) acc += j.delta; // right-continuous convention
        else break;
    }
    return acc;
}

Vec SaltusDecomposition::v_l(double xi) const { return profile_.evaluate(xi) - v_s(xi); }

double SaltusDecomposition::sum_jump_magnitudes() const {
    double s = 0.0;
    for (const SaltusJump& j : jumps_) s += j.delta.norm();
    return s;
}

double SaltusDecomposition::family_jump_sum(int family) const {
    double s = 0.0;
    for (const SaltusJump& j : jumps_)
        if (j.family == family) s += j.delta.norm();
    return s;
}

namespace {

// Sample grid dense enough to expose the Lipschitz behaviour of V_L: fan
// pieces are resolved finely, constants by their endpoints, and each jump is
// straddled tightly.
std::vector<double> lipschitz_grid(const Profile& profile) {
    std::vector<double> grid;
    const auto& breaks = profile.breakpoints();
    if (breaks.empty()) return grid;
    const double margin = 1e-3 * (1.0 + breaks.back() - breaks.front());
    grid.push_back(breaks.front() - margin);
    const auto& pieces = profile.pieces();
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
        const Piece& piece = pieces[b + 1];
        const double lo = breaks[b], hi = breaks[b + 1];
        const int n = piece.type == PieceType::Fan ? 64 : 8;
        for (int k = 0; k <= n; ++k) grid.push_back(lo + (hi - lo) * k / n);
    }
    grid.push_back(breaks.back() + margin);
    // straddle jumps
    for (const Jump& j : profile.jumps()) {
        const double xi = breaks[static_cast<std::size_t>(j.break_index)];
        const double h = 1e-9 * (1.0 + std::fabs(xi));
        grid.push_back(xi - h);
        grid.push_back(xi + h);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

} // namespace

SaltusDecomposition saltus_decompose(const Profile& profile) {
    std::vector<SaltusJump> jumps;
    for (const Jump& j : profile.jumps()) {
        SaltusJump sj;
        sj.xi = profile.breakpoints()[static_cast<std::size_t>(j.break_index)];
        sj.delta = j.delta();
        sj.family = j.family;
        jumps.push_back(sj);
    }
    std::sort(jumps.begin(), jumps.end(),
              [](const SaltusJump& a, const SaltusJump& b) { return a.xi < b.xi; });

    SaltusDecomposition dec(profile, std::move(jumps), 0.0);

    // empirical Lipschitz quotient of V_L over consecutive grid points (the
    // supremum over arbitrary pairs is attained on consecutive ones)
    const std::vector<double> grid = lipschitz_grid(profile);
    double lip = 0.0;
    if (grid.size() >= 2) {
        Vec prev = dec.v_l(grid.front());
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const Vec cur = dec.v_l(grid[i]);
            const double dx = grid[i] - grid[i - 1];
            if (dx > 0.0) lip = std::max(lip, (cur - prev).norm() / dx);
            prev = cur;
        }
    }
    return SaltusDecomposition(profile, dec.jumps(), lip);
}

double total_variation(const Profile& profile, double a, double b) {
    if (a > b) std::swap(a, b);
    double tv = 0.0;
    for (const Jump& j : profile.jumps()) {
        const double xi = profile.breakpoints()[static_cast<std::size_t>(j.break_index)];
        if (xi > a && xi <= b) tv += j.delta().norm();
    }
    // arc variation of fan pieces, refined until stable
    const auto& breaks = profile.breakpoints();
    const auto& pieces = profile.pieces();
    for (std::size_t p = 0; p < pieces.size(); ++p) {
        if (pieces[p].type != PieceType::Fan) continue;
        const double lo = std::max(a, breaks[p - 1]);
        const double hi = std::min(b, breaks[p]);
        if (!(lo < hi)) continue;
        double prev_len = -1.0;
        for (int n = 1024;; n *= 2) {
            double len = 0.0;
            Vec last = profile.evaluate(lo);
            for (int k = 1; k <= n; ++k) {
                // sample strictly inside to avoid picking up jump values
                const double xi = lo + (hi - lo) * k / n;
                const Vec cur = (k == n) ? profile.left_limit(hi) : profile.evaluate(xi);
                len += (cur - last).norm();
                last = cur;
            }
            if (prev_len >= 0.0 && std::fabs(len - prev_len) < profile.system()->tol().tv_refine_tol) {
                tv += len;
                break;
            }
            prev_len = len;
            if (n >= 1 << 16) {
                tv += len;
                break;
            }
        }
    }
    return tv;
}

double total_variation(const Profile& profile) {
    const auto [lo, hi] = profile.support();
    return total_variation(profile, lo - 1.0, hi + 1.0);
}

Vec profile_integral(const Profile& profile, double a, double b) {
    const int m = profile.dim();
    if (a == b) return Vec(m);
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }

    const auto& breaks = profile.breakpoints();
    std::vector<double> cuts{a};
    for (double x : breaks)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);

    Vec total(m);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const double mid = 0.5 * (lo + hi);
        const int idx = static_cast<int>(std::upper_bound(breaks.begin(), breaks.end(), mid) -
                                         breaks.begin());
        const Piece& piece = profile.pieces()[static_cast<std::size_t>(idx)];
        if (piece.type == PieceType::Constant) {
            total += (hi - lo) * piece.value;
        } else {
            total += quad_adaptive([&](double xi) { return profile.evaluate(xi); }, lo, hi,
                                   profile.system()->tol().quad_tol);
        }
    }
    return sign * total;
}

double profile_entropy_integral(const Profile& profile, double a, double b) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    const SystemDef& sys = *profile.system();
    const auto& breaks = profile.breakpoints();
    std::vector<double> cuts{a};
    for (double x : breaks)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const double mid = 0.5 * (lo + hi);
        const int idx = static_cast<int>(std::upper_bound(breaks.begin(), breaks.end(), mid) -
                                         breaks.begin());
        const Piece& piece = profile.pieces()[static_cast<std::size_t>(idx)];
        if (piece.type == PieceType::Constant) {
            total += (hi - lo) * sys.entropy(piece.value);
        } else {
            total += quad_adaptive([&](double xi) { return Vec{sys.entropy(profile.evaluate(xi))}; },
                                   lo, hi, sys.tol().quad_tol)[0];
        }
    }
    return sign * total;
}

} // namespace selfsim
