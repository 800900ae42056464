#include "reachcount/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reachcount/errors.hpp"

namespace reachcount {

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
        throw InvalidBounds("invalid interval [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
    const double lo = std::max(a.lo, b.lo);
    const double hi = std::min(a.hi, b.hi);
    if (lo > hi) return std::nullopt;
    return Interval{lo, hi};
}

Box::Box(std::vector<Interval> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw InvalidBounds("box needs at least one dimension");
}

bool Box::contains(std::span<const double> x) const {
    if (x.size() != dims_.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!dims_[i].contains(x[i])) return false;
    }
    return true;
}

bool Box::contains(const Box& other) const {
    if (other.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
        if (!dims_[i].contains(other.dims_[i])) return false;
    }
    return true;
}

bool Box::all_degenerate() const {
    return std::all_of(dims_.begin(), dims_.end(), [](const Interval& d) { return d.degenerate(); });
}

std::vector<double> Box::lower_corner() const {
    std::vector<double> x(dims_.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = dims_[i].lo;
    return x;
}

bool splittable(const Box& box, std::size_t dim) {
    const auto& d = box[dim];
    const double mid = d.midpoint();
    return d.lo < mid && mid < d.hi;
}

std::pair<Box, Box> bisect(const Box& box, std::size_t dim) {
    if (dim >= box.size()) {
        throw DimensionMismatch("bisect: dimension " + std::to_string(dim) + " out of range");
    }
    const auto& d = box[dim];
    if (d.degenerate()) throw DegenerateDimension("bisect: dimension " + std::to_string(dim) + " has zero width");

    const double mid = d.midpoint();
    auto left = box.dims();
    auto right = box.dims();
    left[dim] = Interval{d.lo, mid};
    right[dim] = Interval{mid, d.hi};
    return {Box(std::move(left)), Box(std::move(right))};
}

std::size_t widest_dim(const Box& box) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < box.size(); ++i) {
        if (box[i].width() > box[best].width()) best = i;
    }
    return best;
}

double volume_fraction(const Box& sub, const Box& parent) {
    if (sub.size() != parent.size()) throw DimensionMismatch("volume_fraction: dimensionality differs");
    if (!parent.contains(sub)) throw NotContained("volume_fraction: sub-box is not inside parent");
    double frac = 1.0;
    for (std::size_t i = 0; i < parent.size(); ++i) {
        if (parent[i].degenerate()) continue;
        frac *= sub[i].width() / parent[i].width();
    }
    return frac;
}

Interval interval_dot(std::span<const double> coeffs, std::span<const Interval> box, double bias) {
    if (coeffs.size() != box.size()) {
        throw DimensionMismatch("interval_dot: " + std::to_string(coeffs.size()) + " coefficients for a " +
                                std::to_string(box.size()) + "-dimensional box");
    }
    double lo = bias;
    double hi = bias;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double c = coeffs[i];
        if (c > 0) {
            lo += c * box[i].lo;
            hi += c * box[i].hi;
        } else if (c < 0) {
            lo += c * box[i].hi;
            hi += c * box[i].lo;
        }
    }
    Interval out;
    out.lo = lo;
    out.hi = hi;
    return out;
}

Interval interval_dot(std::span<const double> coeffs, const Box& box, double bias) {
    return interval_dot(coeffs, std::span<const Interval>(box.dims()), bias);
}

}  // namespace reachcount
