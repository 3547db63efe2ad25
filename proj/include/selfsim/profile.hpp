#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "selfsim/system.hpp"
#include "selfsim/waves.hpp"

namespace selfsim {

/// Simple-wave piece of a profile; xi_offset is zero for every valid profile
/// and only nonzero in deliberately corrupted fixtures (the fan is then
/// evaluated at xi - xi_offset, detaching it from its resonance position).
struct FanPiece {
    int family = 0;
    Vec v_start;
    double strength = 0.0;
    double xi_lo = 0.0;
    double xi_hi = 0.0;
    double xi_offset = 0.0;
    std::shared_ptr<const WaveFan> fan; // evaluation cache, rebuilt on load
};

enum class PieceType { Constant, Fan };

struct Piece {
    PieceType type = PieceType::Constant;
    Vec value;                    // Constant payload
    std::optional<FanPiece> fan;  // Fan payload
};

struct Jump {
    int break_index = 0;
    int family = 0;
    WaveKind kind = WaveKind::Shock; // Shock or Contact
    Vec v_minus, v_plus;

    Vec delta() const { return v_plus - v_minus; }
};

/// Piecewise self-similar profile xi -> V(xi): K breakpoints split the line
/// into K+1 pieces (constants or fans); jumps sit at designated breakpoints.
/// Evaluation is right-continuous at jumps.  Immutable after construction.
class Profile {
public:
    Halfplane halfplane() const { return halfplane_; }
    SystemPtr system() const { return sys_; }
    int dim() const { return sys_->dim(); }

    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    const std::vector<Jump>& jumps() const { return jumps_; }

    Vec evaluate(double xi) const;
    Vec left_limit(double xi) const;

    /// Jump at a given breakpoint index, if any.
    const Jump* jump_at(int break_index) const;

    bool is_constant() const { return breaks_.empty(); }

    /// xi bounds enclosing all non-constant behaviour (background level
    /// outside); constant profiles return [0, 0].
    std::pair<double, double> support() const;

    /// Raw assembly from piece data (deserialization and the mutation
    /// factory); callers are responsible for consistency when validate is
    /// false.  Fan caches are rebuilt when missing.
    static Profile assemble(SystemPtr sys, Halfplane halfplane, std::vector<double> breaks,
                            std::vector<Piece> pieces, std::vector<Jump> jumps, bool validate);

    friend class ProfileBuilder;

private:
    Profile() = default;

    int piece_index(double xi) const;
    Vec eval_piece(int idx, double xi) const;

    SystemPtr sys_;
    Halfplane halfplane_ = Halfplane::XPos;
    std::vector<double> breaks_;
    std::vector<Piece> pieces_;
    std::vector<Jump> jumps_;
};

/// Left-to-right assembly of a profile.  finish() validates the invariants
/// (ordered breakpoints, Rankine-Hugoniot at jumps, continuity elsewhere,
/// values inside the ball) unless told not to -- the unvalidated path exists
/// for the mutation factory.
class ProfileBuilder {
public:
    ProfileBuilder(SystemPtr sys, Halfplane halfplane, Vec v_left);

    const Vec& current() const { return current_; }
    double cursor() const { return cursor_; }

    /// Jump to v_plus at position xi (must exceed the cursor).
    ProfileBuilder& add_jump(double xi, int family, WaveKind kind, const Vec& v_plus);
    /// Fan of the given strength starting at xi_lo = lambda(current state).
    ProfileBuilder& add_fan(int family, double strength);
    /// Raw fan piece for mutation fixtures (no resonance checks).
    ProfileBuilder& add_fan_raw(const FanPiece& piece, const Vec& end_state);

    Profile finish(bool validate = true);

private:
    SystemPtr sys_;
    Halfplane halfplane_;
    std::vector<double> breaks_;
    std::vector<Piece> pieces_;
    std::vector<Jump> jumps_;
    Vec current_;
    double cursor_;
    bool finished_ = false;
};

/// Assembles waves (already ordered by strictly increasing speed) between
/// constant states.  Zero-strength waves are dropped.
Profile profile_from_waves(SystemPtr sys, Halfplane halfplane, const Vec& v_left,
                           const std::vector<Wave>& waves, bool validate = true);

/// Per-family sector around the background characteristic speed.
struct Sector {
    int family = 0;
    double center = 0.0;
    double half_width = 0.0;
    FieldKind kind = FieldKind::GenuinelyNonlinear;
    Halfplane forward_halfplane = Halfplane::XPos;

    double lo() const { return center - half_width; }
    double hi() const { return center + half_width; }
    bool contains(double xi) const { return xi > lo() && xi < hi(); }
};

struct SectorLayout {
    std::vector<Sector> sectors; // ascending by family
    double delta_s = 0.0;        // spectral slack of the system
    double delta_l = 0.0;        // calibrated uniform Lax slope

    /// Index of the sector containing xi, or -1.
    int sector_of(double xi) const;
};

/// Half-widths delta^a = safety * (delta_s + sampled sup |lambda^a(V) -
/// lambda^a(V-bar)|); throws SectorsOverlap when adjacent sectors meet.
SectorLayout sector_layout(const SystemDef& sys);

struct SaltusJump {
    double xi = 0.0;
    Vec delta;
    int family = 0;
};

/// V = V_S + V_L with V_S the right-continuous jump part (sum of the jumps
/// at positions <= xi) and V_L the remainder.
class SaltusDecomposition {
public:
    SaltusDecomposition(Profile profile, std::vector<SaltusJump> jumps, double lipschitz);

    const std::vector<SaltusJump>& jumps() const { return jumps_; }
    double lipschitz_estimate() const { return lipschitz_; }

    Vec v_s(double xi) const;
    Vec v_l(double xi) const;

    double sum_jump_magnitudes() const;
    double family_jump_sum(int family) const;

private:
    Profile profile_;
    std::vector<SaltusJump> jumps_;
    double lipschitz_ = 0.0;
};

SaltusDecomposition saltus_decompose(const Profile& profile);

/// Total variation over [a, b]: jump magnitudes plus the sampled arc
/// variation of the continuous pieces (refined until stable).
double total_variation(const Profile& profile, double a, double b);
double total_variation(const Profile& profile);

/// Piecewise-exact integral of V over [a, b] (adaptive quadrature inside
/// fans, exact on constants).
Vec profile_integral(const Profile& profile, double a, double b);
/// Likewise for the entropy e(V).
double profile_entropy_integral(const Profile& profile, double a, double b);

} // namespace selfsim
