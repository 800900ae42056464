#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "reachcount/bab.hpp"
#include "reachcount/model.hpp"
#include "reachcount/property.hpp"

namespace reachcount {

/// Counter-based seed derivation (splitmix64). stream_seed(s, i) gives the
/// seed of the i-th independent stream below s.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

struct SplitEstimateConfig {
    std::size_t splits = 0;
    std::size_t samples_per_split = 100;
    std::size_t runs = 1;
    double confidence = 0.99;
    std::uint64_t seed = 0;
    BabConfig backend;

    void validate() const;
};

struct EstimateResult {
    double point_estimate = 0.0;
    double lower_bound = 0.0;
    double confidence = 0.0;
    std::vector<double> per_run_estimates;
    std::uint64_t samples_used = 0;
    /// mc_estimate only.
    std::uint64_t violating_samples = 0;
    std::chrono::duration<double> wall_time{0};
};

struct SplitRun {
    double estimate = 0.0;
    std::size_t splits_done = 0;
    std::uint64_t samples_used = 0;
    Box leaf;
};

/// One randomized split-and-multiply run: `splits` sample-balanced
/// bisections with a uniformly random side each time, then an exact count
/// on the leaf scaled back by 2^splits.
SplitRun split_estimate_run_detailed(const Network& net, const SafetyProperty& prop, const SplitEstimateConfig& cfg,
                                     std::uint64_t run_seed);
double split_estimate_run(const Network& net, const SafetyProperty& prop, const SplitEstimateConfig& cfg,
                          std::uint64_t run_seed);

/// `runs` independent runs; point estimate is the median, lower bound the minimum.
EstimateResult split_estimate(const Network& net, const SafetyProperty& prop, const SplitEstimateConfig& cfg);

/// Monte Carlo violation fraction with a one-sided Hoeffding lower bound
/// p - sqrt(ln(1 / (1 - confidence)) / (2 n)).
EstimateResult mc_estimate(const Network& net, const SafetyProperty& prop, std::uint64_t n_samples,
                           double confidence, std::uint64_t seed);

/// Network on [0,1]^3 computing max(x0, x1, x2) - epsilon with two hidden
/// ReLU layers of 32 nodes, and the property y >= 0. Its violation set is
/// the corner cube [0, epsilon)^3, so the true rate is epsilon^3; on the
/// lattice with round(1/epsilon) points per dimension exactly one point per
/// dimension violates. Throws InvalidEpsilon unless 0 < epsilon < 0.1.
std::pair<Network, SafetyProperty> build_tiny_vr_net(double epsilon);

}  // namespace reachcount
