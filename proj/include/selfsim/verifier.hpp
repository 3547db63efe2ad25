#pragma once

#include <string>
#include <vector>

#include "selfsim/profile.hpp"

namespace selfsim {

struct ResidualReport {
    double max_residual = 0.0;
    double worst_lo = 0.0, worst_hi = 0.0; // the pair attaining the maximum
    int n_pairs = 0;
};

/// Residual of the primitive integral identity between sampled endpoint
/// pairs: | integral of V + [f(V) - xi V] |.  Pairs straddle breakpoints,
/// piece interiors and the whole support.  jobs > 1 parallelizes the pair
/// loop (the max-reduction keeps the report deterministic).
ResidualReport weak_residual(const Profile& profile, int n_pairs = 0, int jobs = 1);

struct EntropyReport {
    double worst_violation = 0.0; // positive = inequality violated
    double worst_lo = 0.0, worst_hi = 0.0;
    int n_pairs = 0;
    bool satisfied = false;
};

/// One-sided entropy inequality between endpoint pairs; the direction of the
/// inequality flips with the halfplane.
EntropyReport entropy_residual(const Profile& profile, int n_pairs = 0, int jobs = 1);
EntropyReport entropy_residual(const Profile& profile, Halfplane halfplane, int n_pairs, int jobs);

struct SectorVerdict {
    int family = 0;
    bool forward = true;
    bool pass = true;
    int n_shocks = 0;
    int n_fans = 0;
    int n_contacts = 0;
    std::vector<std::string> reasons;
};

struct StructureReport {
    bool pass = true;
    std::vector<SectorVerdict> sectors;
    std::vector<std::string> global_reasons;
};

/// Structural classification against the sector layout: linearly degenerate
/// sectors carry at most one contact; forward genuinely nonlinear sectors at
/// most one admissible shock or one simple wave; backward sectors allow many
/// shocks but demand the uniform Lax margin, proportional constant
/// neighbourhoods and no adjacent simple waves; everything outside the
/// sectors must be constant.
StructureReport classify_structure(const SectorLayout& layout, const Profile& profile);

struct VerifyReport {
    ResidualReport weak;
    EntropyReport entropy;
    StructureReport structure;
    bool pass = false;
};

/// weak + entropy + structure with the pass thresholds from the tolerance
/// record.
VerifyReport verify_profile(const SectorLayout& layout, const Profile& profile, int n_pairs = 0,
                            int jobs = 1);

/// Empirical Lipschitz quotient of V relative to a resonance point xi0
/// (lambda^a(V(xi0)) = xi0 within tol.resonance_tol), sampled over the
/// containing sector away from jump points.  Throws NotResonant.
double lipschitz_at_resonance(const SectorLayout& layout, const Profile& profile, double xi0);

} // namespace selfsim
