#include "selfsim/generator.hpp"

#include <cmath>

#include "selfsim/errors.hpp"

namespace selfsim {

Profile generate_forward(SystemPtr sys, const SectorLayout& layout, int family, WaveKind kind,
                         double strength) {
    const FieldInfo& field = sys->field(family);
    const Sector& sector = layout.sectors[static_cast<std::size_t>(family)];
    const Halfplane hp = field.forward_halfplane;
    const Vec base = sys->background();

    std::vector<Wave> waves;
    switch (kind) {
        case WaveKind::Shock: {
            if (field.kind != FieldKind::GenuinelyNonlinear)
                raise(Errc::IncompatibleKind, "shock requested on a degenerate family");
            if (strength > 0.0)
                raise(Errc::IncompatibleKind,
                      "forward-sector shocks must take the admissible side s <= 0");
            if (strength != 0.0) waves.push_back(make_shock_wave(*sys, base, family, strength));
            break;
        }
        case WaveKind::SimpleWave: {
            if (field.kind != FieldKind::GenuinelyNonlinear)
                raise(Errc::IncompatibleKind, "fan requested on a degenerate family");
            if (strength < 0.0)
                raise(Errc::IncompatibleKind, "simple waves take s >= 0");
            if (strength != 0.0) waves.push_back(make_fan_wave(*sys, base, family, strength));
            break;
        }
        case WaveKind::Contact: {
            if (field.kind != FieldKind::LinearlyDegenerate)
                raise(Errc::IncompatibleKind, "contact requested on a nonlinear family");
            if (strength != 0.0) waves.push_back(contact_wave(*sys, base, family, strength));
            break;
        }
    }

    for (const Wave& w : waves)
        if (w.speed_lo <= sector.lo() || w.speed_hi >= sector.hi())
            raise(Errc::OutOfBall, "wave does not fit inside its sector");

    return profile_from_waves(sys, hp, base, waves);
}

Profile generate_backward(SystemPtr sys, const SectorLayout& layout, int family,
                          const std::vector<BackwardItem>& items) {
    const FieldInfo& field = sys->field(family);
    if (field.kind != FieldKind::GenuinelyNonlinear)
        raise(Errc::IncompatibleKind, "backward wave programs require a genuinely nonlinear family");
    const Sector& sector = layout.sectors[static_cast<std::size_t>(family)];

    for (std::size_t i = 0; i + 1 < items.size(); ++i)
        if (std::holds_alternative<BackwardCompression>(items[i]) &&
            std::holds_alternative<BackwardCompression>(items[i + 1]))
            raise(Errc::ConsecutiveSimpleWaves,
                  "two simple waves need at least one shock between them");

    const Halfplane hp = opposite(field.forward_halfplane);
    ProfileBuilder builder(sys, hp, sys->background());

    double last_speed = sector.lo();
    for (const BackwardItem& item : items) {
        if (const auto* shock = std::get_if<BackwardShock>(&item)) {
            if (!(shock->strength > 0.0))
                raise(Errc::IncompatibleKind,
                      "backward-admissible shocks take s > 0 after orientation");
            Wave w;
            try {
                w = make_shock_wave(*sys, builder.current(), family, shock->strength);
            } catch (const Error& e) {
                if (e.code() == Errc::LeftBall || e.code() == Errc::OutOfBall)
                    raise(Errc::DoesNotFit, e.what());
                throw;
            }
            // drop jumps that cannot be separated from the previous wave in
            // double precision (vanishing strengths in accumulation fixtures)
            const double min_gap = 8.0 * std::numeric_limits<double>::epsilon() *
                                   (1.0 + std::fabs(w.speed_lo));
            if (w.speed_lo - last_speed < min_gap) continue;
            builder.add_jump(w.speed_lo, family, WaveKind::Shock, w.v_plus);
            last_speed = w.speed_lo;
        } else {
            const auto& comp = std::get<BackwardCompression>(item);
            if (!(comp.strength > 0.0)) raise(Errc::IncompatibleKind, "compression strength must be > 0");
            try {
                builder.add_fan(family, comp.strength);
            } catch (const Error& e) {
                if (e.code() == Errc::LeftBall || e.code() == Errc::OutOfBall)
                    raise(Errc::DoesNotFit, e.what());
                throw;
            }
            last_speed = builder.cursor();
        }
        if (last_speed >= sector.hi())
            raise(Errc::DoesNotFit, "wave program exceeds the sector");
    }
    return builder.finish();
}

Profile generate_backward_shocks(SystemPtr sys, const SectorLayout& layout, int family, int n,
                                 double strength_each) {
    std::vector<BackwardItem> items(static_cast<std::size_t>(n), BackwardShock{strength_each});
    return generate_backward(std::move(sys), layout, family, items);
}

namespace {

// Shift every piece and jump strictly right of breakpoint index b0 by dv
// (only possible when they are all constants; mutations on fan-bearing tails
// are rejected as inapplicable).
void shift_downstream(std::vector<Piece>& pieces, std::vector<Jump>& jumps, int b0, const Vec& dv) {
    for (std::size_t p = static_cast<std::size_t>(b0) + 1; p < pieces.size(); ++p) {
        if (pieces[p].type != PieceType::Constant)
            raise(Errc::InapplicableMutation, "mutation would invalidate a downstream fan");
        pieces[p].value += dv;
    }
    for (Jump& j : jumps) {
        if (j.break_index > b0) {
            j.v_minus += dv;
            j.v_plus += dv;
        }
    }
}

} // namespace

Profile mutate(const Profile& profile, Mutation mutation, const MutationParams& params) {
    SystemPtr sys = profile.system();
    const auto& breaks = profile.breakpoints();

    switch (mutation) {
        case Mutation::SpeedShift: {
            if (profile.jumps().empty())
                raise(Errc::InapplicableMutation, "no jump to shift");
            const std::size_t j = static_cast<std::size_t>(params.jump_index);
            if (j >= profile.jumps().size()) raise(Errc::InapplicableMutation, "jump index out of range");
            double delta = params.magnitude != 0.0 ? params.magnitude : 1e-3;

            std::vector<double> new_breaks = breaks;
            const std::size_t b = static_cast<std::size_t>(profile.jumps()[j].break_index);
            if (b + 1 < new_breaks.size())
                delta = std::min(delta, 0.999 * (new_breaks[b + 1] - new_breaks[b]));
            new_breaks[b] += delta;
            return Profile::assemble(sys, profile.halfplane(), std::move(new_breaks),
                                     profile.pieces(), profile.jumps(), false);
        }

        case Mutation::SideFlip: {
            for (std::size_t j = 0; j < profile.jumps().size(); ++j) {
                const Jump& jump = profile.jumps()[j];
                if (jump.kind != WaveKind::Shock) continue;
                // recover the strength from the jump magnitude and flip sides
                const double mag = jump.delta().norm();
                const double side =
                    (sys->eigenvalue(jump.v_plus, jump.family) >
                     sys->eigenvalue(jump.v_minus, jump.family))
                        ? 1.0
                        : -1.0;
                const Wave flipped = make_shock_wave(*sys, jump.v_minus, jump.family, -side * mag);

                std::vector<double> new_breaks = breaks;
                std::vector<Piece> pieces = profile.pieces();
                std::vector<Jump> jumps = profile.jumps();
                const int b = jump.break_index;
                new_breaks[static_cast<std::size_t>(b)] = flipped.speed_lo;
                jumps[j].v_plus = flipped.v_plus;
                shift_downstream(pieces, jumps, b, flipped.v_plus - jump.v_plus);
                return Profile::assemble(sys, profile.halfplane(), std::move(new_breaks),
                                         std::move(pieces), std::move(jumps), false);
            }
            raise(Errc::InapplicableMutation, "no shock to flip");
        }

        case Mutation::DuplicateForwardWave: {
            if (profile.jumps().empty())
                raise(Errc::InapplicableMutation, "no jump to duplicate");
            const Jump& jump = profile.jumps().front();
            const double xi = breaks[static_cast<std::size_t>(jump.break_index)];
            const double gap = params.magnitude != 0.0 ? params.magnitude : 1e-3;

            ProfileBuilder b(sys, profile.halfplane(), jump.v_minus);
            b.add_jump(xi, jump.family, jump.kind, jump.v_plus);
            b.add_jump(xi + gap, jump.family, jump.kind, jump.v_plus + jump.delta());
            return b.finish(false);
        }

        case Mutation::RhViolation: {
            if (profile.jumps().empty())
                raise(Errc::InapplicableMutation, "no jump to perturb");
            const std::size_t j = static_cast<std::size_t>(params.jump_index);
            if (j >= profile.jumps().size()) raise(Errc::InapplicableMutation, "jump index out of range");
            const double delta = params.magnitude != 0.0 ? params.magnitude : 1e-4;

            std::vector<Piece> pieces = profile.pieces();
            std::vector<Jump> jumps = profile.jumps();
            Vec dv(profile.dim());
            dv[0] = delta;
            jumps[j].v_plus[0] += delta;
            shift_downstream(pieces, jumps, jumps[j].break_index, dv);
            return Profile::assemble(sys, profile.halfplane(), breaks, std::move(pieces),
                                     std::move(jumps), false);
        }

        case Mutation::AdjacentFans: {
            for (std::size_t p = 0; p < profile.pieces().size(); ++p) {
                const Piece& piece = profile.pieces()[p];
                if (piece.type != PieceType::Fan) continue;
                const FanPiece& fp = *piece.fan;
                const double third = fp.strength / 3.0;
                if (!(third > 0.0)) continue;

                SystemPtr s = sys;
                ProfileBuilder b(s, profile.halfplane(), fp.v_start);
                b.add_fan(fp.family, third);
                const Vec w1 = b.current();
                // second fan displaced by a constant gap: two simple waves
                // with no shock between them
                WaveFan second(s, w1, fp.family, third);
                const double gap = params.magnitude != 0.0 ? params.magnitude
                                                           : 0.5 * (second.xi_hi() - second.xi_lo());
                FanPiece shifted;
                shifted.family = fp.family;
                shifted.v_start = w1;
                shifted.strength = third;
                shifted.xi_lo = second.xi_lo() + gap;
                shifted.xi_hi = second.xi_hi() + gap;
                shifted.xi_offset = gap;
                shifted.fan = std::make_shared<WaveFan>(std::move(second));
                b.add_fan_raw(shifted, shifted.fan->v_plus());
                return b.finish(false);
            }
            raise(Errc::InapplicableMutation, "no fan to split");
        }
    }
    raise(Errc::InapplicableMutation, "unknown mutation");
}

} // namespace selfsim
