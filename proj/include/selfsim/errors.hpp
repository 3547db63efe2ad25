#pragma once

#include <stdexcept>
#include <string>

namespace selfsim {

/// Failure categories raised by the numerical kernels and the wave/profile
/// machinery.  The name of the category is stable and is what the CLI prints
/// when it exits with a numerical-failure code.
enum class Errc {
    NotStrictlyHyperbolic,
    NoConvergence,
    SingularJacobian,
    StepFailure,
    ToleranceNotMet,
    NotInvertible,
    EntropyPairMismatch,
    MixedNonlinearity,
    DegenerateForm,
    LeftBall,
    NotGNL,
    NotLD,
    NotAJump,
    OutOfBall,
    SectorsOverlap,
    NotResonant,
    IncompatibleKind,
    DoesNotFit,
    ConsecutiveSimpleWaves,
    InapplicableMutation,
    NonPhysical,
    Subsonic,
    DimensionMismatch,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }
    const char* name() const noexcept { return errc_name(code_); }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace selfsim
