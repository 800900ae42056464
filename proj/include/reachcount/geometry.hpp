#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace reachcount {

/// Closed scalar interval [lo, hi] with finite endpoints.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    /// Throws InvalidBounds unless lo <= hi and both are finite.
    Interval(double lo, double hi);

    double width() const { return hi - lo; }
    double midpoint() const { return lo + (hi - lo) / 2.0; }
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool degenerate() const { return lo == hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

Interval hull(const Interval& a, const Interval& b);
/// Empty optional when the intersection is empty.
std::optional<Interval> intersect(const Interval& a, const Interval& b);

/// Axis-aligned hyperrectangle.
class Box {
public:
    Box() = default;
    explicit Box(std::vector<Interval> dims);
    Box(std::initializer_list<Interval> dims) : Box(std::vector<Interval>(dims)) {}

    std::size_t size() const { return dims_.size(); }
    const Interval& operator[](std::size_t i) const { return dims_[i]; }
    const std::vector<Interval>& dims() const { return dims_; }

    bool contains(std::span<const double> x) const;
    bool contains(const Box& other) const;
    bool all_degenerate() const;
    std::vector<double> lower_corner() const;

    friend bool operator==(const Box&, const Box&) = default;

private:
    std::vector<Interval> dims_;
};

/// Splits dims[dim] at its exact midpoint. Throws DegenerateDimension for a
/// zero-width dimension and DimensionMismatch for an out-of-range index.
std::pair<Box, Box> bisect(const Box& box, std::size_t dim);

/// True when the midpoint of dims[dim] lies strictly inside the interval.
bool splittable(const Box& box, std::size_t dim);

/// Index of the widest dimension, lowest index on ties.
std::size_t widest_dim(const Box& box);

/// Product over non-degenerate parent dimensions of width(sub)/width(parent).
/// Throws NotContained when sub is not inside parent.
double volume_fraction(const Box& sub, const Box& parent);

/// Exact range of coeffs . x + bias over the box, by the sign rule.
Interval interval_dot(std::span<const double> coeffs, const Box& box, double bias);
Interval interval_dot(std::span<const double> coeffs, std::span<const Interval> box, double bias);

}  // namespace reachcount
