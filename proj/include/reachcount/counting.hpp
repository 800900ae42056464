#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "reachcount/bab.hpp"
#include "reachcount/model.hpp"
#include "reachcount/property.hpp"

namespace reachcount {

/// Violation-rate interval and exploration statistics.
struct VrResult {
    double vr_lb = 0.0;
    double vr_ub = 0.0;
    bool exact = false;
    bool timed_out = false;
    std::uint64_t nodes_explored = 0;
    std::size_t max_depth_reached = 0;
    double residual_volume = 0.0;
    std::chrono::duration<double> wall_time{0};
    /// Discrete mode only: exact point counts behind vr_lb == vr_ub.
    std::optional<std::uint64_t> violating_points;
    std::optional<std::uint64_t> total_points;
};

/// Uniform lattice over a box, endpoints included. A zero-width dimension
/// always has exactly one point; a single point sits at the lower bound.
class GridSpec {
public:
    GridSpec() = default;
    /// Throws InvalidConfig for a zero entry or a point count that overflows 64 bits.
    explicit GridSpec(std::vector<std::uint64_t> points_per_dim);
    /// Same count on every dimension.
    static GridSpec uniform(std::size_t dims, std::uint64_t points);

    const std::vector<std::uint64_t>& points_per_dim() const { return points_; }
    std::size_t dims() const { return points_.size(); }

    /// Effective point count on `dim` of `box` (1 for zero-width dimensions).
    std::uint64_t points_on(const Box& box, std::size_t dim) const;
    std::uint64_t total_points(const Box& box) const;
    /// Coordinate of lattice index i along dim.
    double coordinate(const Box& box, std::size_t dim, std::uint64_t i) const;

private:
    std::vector<std::uint64_t> points_;
};

/// Breadth-first branch and bound over the precondition with a depth cap.
/// vr_lb is the certified violating volume, vr_ub adds whatever stayed
/// unresolved.
VrResult exact_count(const Network& net, const SafetyProperty& prop, const BabConfig& cfg);

/// Violation count over the grid points, pruned by branch and bound. Always exact.
VrResult exact_count_discrete(const Network& net, const SafetyProperty& prop, const GridSpec& grid,
                              const BabConfig& cfg);

struct PointCount {
    std::uint64_t violating = 0;
    std::uint64_t total = 0;
    double rate() const { return total == 0 ? 0.0 : static_cast<double>(violating) / static_cast<double>(total); }
};

inline constexpr std::uint64_t kBruteForceLimit = 100'000'000;

/// Plain enumeration of every grid point. Throws GridTooLarge above kBruteForceLimit.
PointCount brute_force_count(const Network& net, const SafetyProperty& prop, const GridSpec& grid,
                             std::size_t workers = 1);
double brute_force_vr(const Network& net, const SafetyProperty& prop, const GridSpec& grid, std::size_t workers = 1);

}  // namespace reachcount
