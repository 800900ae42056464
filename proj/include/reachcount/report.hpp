#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace reachcount {

inline constexpr const char* kToolVersion = "0.1.0";

/// Machine-readable outcome of one CLI invocation. Every key is always
/// emitted; fields that do not apply to the mode are null.
struct VerificationReport {
    std::string mode;
    std::string model_path;
    std::string property_path;
    std::optional<double> vr_lb;
    std::optional<double> vr_ub;
    std::optional<double> point_estimate;
    bool exact = false;
    bool timed_out = false;
    std::optional<std::string> verdict;
    std::uint64_t nodes_explored = 0;
    std::uint64_t max_depth_reached = 0;
    double residual_volume = 0.0;
    std::string propagator;
    std::uint64_t workers = 1;
    std::uint64_t chunk_size = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> violating_points;
    std::optional<std::uint64_t> total_points;

    struct Estimator {
        std::optional<std::uint64_t> splits;
        std::optional<std::uint64_t> samples_per_split;
        std::optional<std::uint64_t> runs;
        std::optional<std::uint64_t> samples;
        double confidence = 0.99;
        std::uint64_t samples_used = 0;
    };
    std::optional<Estimator> estimator;

    double wall_time_ms = 0.0;
    std::string tool_version = kToolVersion;

    nlohmann::json to_json() const;
};

}  // namespace reachcount
