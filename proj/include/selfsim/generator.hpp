#pragma once

#include <variant>
#include <vector>

#include "selfsim/profile.hpp"

namespace selfsim {

/// Items of a backward-sector wave program, laid out left to right.  A
/// shock's position and both constant neighbourhoods follow from the states
/// (the neighbourhood ends exactly where the characteristic speed of the
/// adjacent constant state resonates with xi), so explicit constant
/// separators carry no data; compressions insert a fan of the given
/// strength starting at the resonance point of the current state.
struct BackwardShock {
    double strength = 0.0; // > 0: the backward-admissible side
};
struct BackwardCompression {
    double strength = 0.0; // > 0
};
using BackwardItem = std::variant<BackwardShock, BackwardCompression>;

/// Single-wave profile in the family's forward sector, constant elsewhere.
/// Shocks must sit on the admissible side (s <= 0), fans on s >= 0 and
/// contacts require a linearly degenerate family; anything else throws
/// IncompatibleKind.
Profile generate_forward(SystemPtr sys, const SectorLayout& layout, int family, WaveKind kind,
                         double strength);

/// Backward-sector assembly: shocks (optionally interspersed with
/// compression fans) walking rightwards from the background state.  Two
/// consecutive compressions are rejected (ConsecutiveSimpleWaves), waves
/// exceeding the sector raise DoesNotFit.  Waves whose breakpoints could not
/// be separated in double precision are dropped.
Profile generate_backward(SystemPtr sys, const SectorLayout& layout, int family,
                          const std::vector<BackwardItem>& items);

/// Convenience wrapper: n equal-strength shocks with constant separators.
Profile generate_backward_shocks(SystemPtr sys, const SectorLayout& layout, int family, int n,
                                 double strength_each);

enum class Mutation {
    SpeedShift,         // move one jump off its Hugoniot speed
    SideFlip,           // replace a shock with its inadmissible-side twin
    DuplicateForwardWave,
    RhViolation,        // perturb one component of a jump's right state
    AdjacentFans,       // split a fan into two with a constant gap, no shock
};

struct MutationParams {
    int jump_index = 0;     // which jump (for jump mutations)
    double magnitude = 0.0; // 0 = kind-specific default
};

/// Deterministic, parameterized corruption used to exercise the verifier's
/// failure detection.  Throws InapplicableMutation when the profile lacks
/// the required feature.
Profile mutate(const Profile& profile, Mutation mutation, const MutationParams& params = {});

} // namespace selfsim
