#pragma once

#include <string>

#include "selfsim/euler.hpp"
#include "selfsim/generator.hpp"
#include "selfsim/profile.hpp"
#include "selfsim/riemann.hpp"
#include "selfsim/verifier.hpp"

namespace selfsim {

inline constexpr const char* kSchemaTag = "selfsim/1";

/// Loaded system configuration: the SystemDef plus the pieces needed to
/// rebuild or describe it.
struct SystemConfig {
    SystemPtr sys;
    PressureLaw law = PressureLaw::gamma_law(1.4);
    EulerState background;
    double gamma = 1.4;
    double epsilon = 0.0;
};

SystemConfig system_from_json_text(const std::string& text);
SystemConfig system_from_json_file(const std::string& path);
std::string system_to_json_text(const SystemConfig& config);

EulerState state_from_json_file(const std::string& path);
std::string state_to_json_text(const EulerState& state);

std::string profile_to_json_text(const Profile& profile);
Profile profile_from_json_text(SystemPtr sys, const std::string& text, bool validate = true);
Profile profile_from_json_file(SystemPtr sys, const std::string& path, bool validate = true);

std::string wave_to_json_text(const Wave& wave);

std::string saltus_to_json_text(const SaltusDecomposition& dec, const SectorLayout& layout,
                                double tv);

std::string verify_report_to_json_text(const VerifyReport& report);

/// CSV with xi in the first column and the state components after it.
std::string profile_to_csv(const Profile& profile, int samples_per_piece = 64);

/// Shock and simple-wave curve tabulation: kind, s, V components, xi, E.
std::string curves_to_csv(const SystemDef& sys, int family, double s_lo, double s_hi, int n);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace selfsim
