#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "reachcount/geometry.hpp"
#include "reachcount/model.hpp"

namespace reachcount {

/// coeffs . x + bias over the network input symbols.
struct AffineForm {
    std::vector<double> coeffs;
    double bias = 0.0;

    double evaluate(std::span<const double> x) const;
};

/// Lower/upper affine forms and concrete bounds for every node of one layer.
/// Coefficients are stored densely, one row of length input_size per node.
class SymbolicBounds {
public:
    SymbolicBounds() = default;
    SymbolicBounds(std::size_t nodes, std::size_t input_size);

    std::size_t nodes() const { return concrete_.size(); }
    std::size_t input_size() const { return input_size_; }

    std::span<double> lower_coeffs(std::size_t node) { return {lower_.data() + node * input_size_, input_size_}; }
    std::span<double> upper_coeffs(std::size_t node) { return {upper_.data() + node * input_size_, input_size_}; }
    std::span<const double> lower_coeffs(std::size_t node) const {
        return {lower_.data() + node * input_size_, input_size_};
    }
    std::span<const double> upper_coeffs(std::size_t node) const {
        return {upper_.data() + node * input_size_, input_size_};
    }
    double& lower_bias(std::size_t node) { return lower_bias_[node]; }
    double& upper_bias(std::size_t node) { return upper_bias_[node]; }
    double lower_bias(std::size_t node) const { return lower_bias_[node]; }
    double upper_bias(std::size_t node) const { return upper_bias_[node]; }
    Interval& concrete(std::size_t node) { return concrete_[node]; }
    const Interval& concrete(std::size_t node) const { return concrete_[node]; }
    const std::vector<Interval>& concrete() const { return concrete_; }

    AffineForm lower_form(std::size_t node) const;
    AffineForm upper_form(std::size_t node) const;
    void set_lower_form(std::size_t node, const AffineForm& form);
    void set_upper_form(std::size_t node, const AffineForm& form);

private:
    std::size_t input_size_ = 0;
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<double> lower_bias_;
    std::vector<double> upper_bias_;
    std::vector<Interval> concrete_;
};

/// Sound over-approximation of the image of a box, one interval per output.
struct ReachSet {
    std::vector<Interval> outputs;
    std::optional<SymbolicBounds> symbolic;

    bool contains(std::span<const double> y) const;
    bool contains(const ReachSet& other) const;
};

enum class Propagator { Naive, Sip, Slr };

std::string to_string(Propagator p);
/// Accepts "naive", "sip", "slr"; throws InvalidConfig otherwise.
Propagator parse_propagator(const std::string& name);

/// Layer-by-layer Moore propagation.
ReachSet naive_forward(const Network& net, const Box& box);

/// Triangle relaxation of an unstable ReLU. Returns the relaxed
/// (lower, upper) forms; throws InvalidBounds when l > u.
std::pair<AffineForm, AffineForm> relu_relax(const AffineForm& lower_eq, const AffineForm& upper_eq, double l,
                                             double u);

/// Symbolic propagation. `mode` selects how unstable ReLU nodes are handled:
/// Slr keeps relaxed equations, Sip concretizes them. Naive is forwarded to
/// naive_forward.
ReachSet symbolic_forward(const Network& net, const Box& box, Propagator mode = Propagator::Slr);

/// `enclosure`, when given, holds output bounds already known to be sound
/// for the box (typically those of the box it was bisected from); the result
/// is intersected with it, so a refined box never reports looser outputs.
ReachSet propagate(const Network& net, const Box& box, Propagator mode, std::span<const Interval> enclosure = {});

/// Per node: [min of lower form, max of upper form] over the box.
std::vector<Interval> concretize_forms(const SymbolicBounds& bounds, const Box& box);

}  // namespace reachcount
