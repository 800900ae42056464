#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reachcount/bab.hpp"
#include "reachcount/report.hpp"

namespace reachcount {

/// Exit statuses of the command-line tool.
namespace exit_code {
inline constexpr int kSafe = 0;
inline constexpr int kViolating = 1;
inline constexpr int kUnknown = 2;
inline constexpr int kUsage = 64;
inline constexpr int kMalformedInput = 65;
inline constexpr int kInternal = 70;
}  // namespace exit_code

struct CliOptions {
    std::filesystem::path model;
    std::filesystem::path property;
    BabConfig bab;
    std::vector<std::uint64_t> grid{17};
    std::size_t splits = 0;
    std::size_t runs = 1;
    std::size_t samples_per_split = 100;
    std::uint64_t samples = 1'000'000;
    double confidence = 0.99;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> output;
};

struct CommandResult {
    int exit_code = exit_code::kInternal;
    VerificationReport report;
};

CommandResult cmd_check(const CliOptions& opts);
CommandResult cmd_count(const CliOptions& opts);
CommandResult cmd_count_discrete(const CliOptions& opts);
CommandResult cmd_approx(const CliOptions& opts);
CommandResult cmd_sample(const CliOptions& opts);

/// Full command-line entry point: parses argv, runs the subcommand, writes
/// the JSON report to `out` (and --output) and a summary to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace reachcount
