#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opennet/specfile.hpp"

namespace opennet::cli {

inline constexpr const char* kToolName = "opennet";
inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitVerdictFalse = 1;
inline constexpr int kExitParseError = 2;
inline constexpr int kExitDanglingReference = 3;
inline constexpr int kExitDimensionError = 4;
inline constexpr int kExitUsage = 5;
inline constexpr int kExitPreconditionFailure = 6;

// Command-line values that shadow the spec file's run parameters.
struct RunOverrides {
    std::optional<int> samples;
    std::optional<double> tolerance;
    std::optional<double> dt;
    std::optional<double> t1;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> outPath;  // CSV destination for simulate
};

struct DispatchResult {
    nlohmann::ordered_json report;
    int exitCode = kExitSuccess;
};

const std::vector<std::string>& commandNames();

// Runs one command against a loaded spec. Negative verdicts and failed
// preconditions come back as exit codes in the result; spec-level problems
// (SpecParseError / DanglingReferenceError / DimensionError) propagate as
// exceptions so the caller maps them uniformly.
DispatchResult dispatch(const std::string& command, const SpecFile& spec,
                        const RunOverrides& overrides);

// Deterministic plain-text rendering of a report.
std::string renderReport(const nlohmann::ordered_json& report);

}  // namespace opennet::cli
