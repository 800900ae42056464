#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "reachcount/geometry.hpp"
#include "reachcount/model.hpp"
#include "reachcount/property.hpp"
#include "reachcount/propagation.hpp"

namespace reachcount {

/// One layer of the branch-and-bound tree. volumes[i] is the fraction of
/// the root precondition covered by boxes[i]. enclosures[i], when present
/// and non-empty, holds the output bounds inherited from the parent box.
struct Frontier {
    std::size_t depth = 0;
    std::vector<Box> boxes;
    std::vector<double> volumes;
    std::vector<std::vector<Interval>> enclosures;

    static Frontier root(const Box& box);
    std::size_t size() const { return boxes.size(); }
    bool empty() const { return boxes.empty(); }
    double total_volume() const;
};

/// Dense (n, k, 2) bounds matrix: bounds[(i * k + d) * 2 + {0: lo, 1: hi}].
struct BatchLayout {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<double> bounds;

    double lo(std::size_t i, std::size_t d) const { return bounds[(i * k + d) * 2]; }
    double hi(std::size_t i, std::size_t d) const { return bounds[(i * k + d) * 2 + 1]; }
    Box row(std::size_t i) const;
    std::vector<Box> rows() const;
};

struct BabConfig {
    std::size_t max_depth = 20;
    std::size_t chunk_size = 4096;
    std::size_t workers = 1;
    Propagator propagator = Propagator::Slr;
    std::optional<std::chrono::duration<double>> timeout;

    /// Throws InvalidConfig when a field is out of range.
    void validate() const;
};

BatchLayout to_batch(const Frontier& frontier);

struct FrontierEvaluation {
    std::vector<Verdict> verdicts;
    /// Output bounds of every box, handed down to its children by refine.
    std::vector<std::vector<Interval>> outputs;
};

/// verdict[i] = classify(propagate(net, boxes[i], enclosures[i]), prop, boxes[i]).
/// The result does not depend on cfg.workers or cfg.chunk_size.
FrontierEvaluation evaluate_frontier_full(const Network& net, const Frontier& frontier, const SafetyProperty& prop,
                                          const BabConfig& cfg);
std::vector<Verdict> evaluate_frontier(const Network& net, const Frontier& frontier, const SafetyProperty& prop,
                                       const BabConfig& cfg);

struct RefineOutcome {
    double safe_volume = 0.0;
    double violating_volume = 0.0;
    /// UNKNOWN boxes that were not split (split_unknown == false).
    double unknown_volume = 0.0;
    /// UNKNOWN boxes with no dimension left to bisect.
    double residual_volume = 0.0;
    std::vector<Box> residual;
    Frontier next;
};

/// Settles SAFE/VIOLATING volume and bisects every UNKNOWN box along its
/// widest splittable dimension. With split_unknown == false the UNKNOWN
/// volume is reported instead of split. When `outputs` is given, children
/// inherit their parent's output bounds as enclosures.
RefineOutcome refine(const Frontier& frontier, std::span<const Verdict> verdicts, bool split_unknown = true,
                     std::span<const std::vector<Interval>> outputs = {});

}  // namespace reachcount
