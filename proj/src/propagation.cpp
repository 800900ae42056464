#include "reachcount/propagation.hpp"

#include <algorithm>
#include <string>

#include "reachcount/errors.hpp"

namespace reachcount {

double AffineForm::evaluate(std::span<const double> x) const {
    if (x.size() != coeffs.size()) throw DimensionMismatch("AffineForm::evaluate: dimension mismatch");
    double acc = bias;
    for (std::size_t i = 0; i < x.size(); ++i) acc += coeffs[i] * x[i];
    return acc;
}

SymbolicBounds::SymbolicBounds(std::size_t nodes, std::size_t input_size)
    : input_size_(input_size),
      lower_(nodes * input_size, 0.0),
      upper_(nodes * input_size, 0.0),
      lower_bias_(nodes, 0.0),
      upper_bias_(nodes, 0.0),
      concrete_(nodes) {}

AffineForm SymbolicBounds::lower_form(std::size_t node) const {
    auto c = lower_coeffs(node);
    return {{c.begin(), c.end()}, lower_bias_[node]};
}

AffineForm SymbolicBounds::upper_form(std::size_t node) const {
    auto c = upper_coeffs(node);
    return {{c.begin(), c.end()}, upper_bias_[node]};
}

void SymbolicBounds::set_lower_form(std::size_t node, const AffineForm& form) {
    if (form.coeffs.size() != input_size_) throw DimensionMismatch("set_lower_form: wrong coefficient count");
    std::copy(form.coeffs.begin(), form.coeffs.end(), lower_coeffs(node).begin());
    lower_bias_[node] = form.bias;
}

void SymbolicBounds::set_upper_form(std::size_t node, const AffineForm& form) {
    if (form.coeffs.size() != input_size_) throw DimensionMismatch("set_upper_form: wrong coefficient count");
    std::copy(form.coeffs.begin(), form.coeffs.end(), upper_coeffs(node).begin());
    upper_bias_[node] = form.bias;
}

bool ReachSet::contains(std::span<const double> y) const {
    if (y.size() != outputs.size()) return false;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!outputs[i].contains(y[i])) return false;
    }
    return true;
}

bool ReachSet::contains(const ReachSet& other) const {
    if (other.outputs.size() != outputs.size()) return false;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        if (!outputs[i].contains(other.outputs[i])) return false;
    }
    return true;
}

std::string to_string(Propagator p) {
    switch (p) {
        case Propagator::Naive: return "naive";
        case Propagator::Sip: return "sip";
        case Propagator::Slr: return "slr";
    }
    return "slr";
}

Propagator parse_propagator(const std::string& name) {
    if (name == "naive") return Propagator::Naive;
    if (name == "sip") return Propagator::Sip;
    if (name == "slr") return Propagator::Slr;
    throw InvalidConfig("unknown propagator '" + name + "' (expected naive, sip or slr)");
}

namespace {

void check_box(const Network& net, const Box& box) {
    if (box.size() != net.input_size()) {
        throw DimensionMismatch("box has " + std::to_string(box.size()) + " dimensions, network expects " +
                                std::to_string(net.input_size()));
    }
}

Interval relu(const Interval& v) {
    Interval out;
    out.lo = std::max(v.lo, 0.0);
    out.hi = std::max(v.hi, 0.0);
    return out;
}

// Point box: every propagator collapses to one exact evaluation.
ReachSet point_reach(const Network& net, const Box& box, bool with_forms) {
    auto y = net.forward(box.lower_corner());
    ReachSet reach;
    for (double v : y) reach.outputs.push_back(Interval{v, v});
    if (with_forms) {
        SymbolicBounds sb(y.size(), net.input_size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            sb.lower_bias(i) = y[i];
            sb.upper_bias(i) = y[i];
            sb.concrete(i) = reach.outputs[i];
        }
        reach.symbolic = std::move(sb);
    }
    return reach;
}

}  // namespace

ReachSet naive_forward(const Network& net, const Box& box) {
    check_box(net, box);
    if (box.all_degenerate()) return point_reach(net, box, false);

    std::vector<Interval> cur = box.dims();
    std::vector<Interval> next;
    for (const auto& layer : net.layers()) {
        next.resize(layer.rows);
        for (std::size_t i = 0; i < layer.rows; ++i) {
            Interval v = interval_dot(layer.row(i), cur, layer.biases[i]);
            next[i] = layer.activation == Activation::Relu ? relu(v) : v;
        }
        cur.swap(next);
    }
    return ReachSet{std::move(cur), std::nullopt};
}

std::pair<AffineForm, AffineForm> relu_relax(const AffineForm& lower_eq, const AffineForm& upper_eq, double l,
                                             double u) {
    if (!(l <= u)) throw InvalidBounds("relu_relax: lower bound exceeds upper bound");
    if (lower_eq.coeffs.size() != upper_eq.coeffs.size()) {
        throw DimensionMismatch("relu_relax: forms over different input dimensions");
    }
    if (u <= 0) {
        AffineForm zero{std::vector<double>(lower_eq.coeffs.size(), 0.0), 0.0};
        return {zero, zero};
    }
    if (l >= 0) return {lower_eq, upper_eq};

    const double scale = u / (u - l);
    AffineForm lower = lower_eq;
    AffineForm upper = upper_eq;
    for (auto& c : lower.coeffs) c *= scale;
    lower.bias *= scale;
    for (auto& c : upper.coeffs) c *= scale;
    upper.bias = scale * (upper.bias - l);
    return {lower, upper};
}

ReachSet symbolic_forward(const Network& net, const Box& box, Propagator mode) {
    if (mode == Propagator::Naive) return naive_forward(net, box);
    check_box(net, box);
    if (box.all_degenerate()) return point_reach(net, box, true);

    const std::size_t k = net.input_size();
    SymbolicBounds prev(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        prev.lower_coeffs(i)[i] = 1.0;
        prev.upper_coeffs(i)[i] = 1.0;
        prev.concrete(i) = box[i];
    }

    for (const auto& layer : net.layers()) {
        SymbolicBounds cur(layer.rows, k);
        for (std::size_t i = 0; i < layer.rows; ++i) {
            auto lo_c = cur.lower_coeffs(i);
            auto hi_c = cur.upper_coeffs(i);
            double lo_b = layer.biases[i];
            double hi_b = layer.biases[i];
            const auto w = layer.row(i);
            for (std::size_t j = 0; j < layer.cols; ++j) {
                const double wj = w[j];
                if (wj == 0.0) continue;
                // Positive weights pair like bounds, negative weights swap them.
                const bool pos = wj > 0;
                auto src_lo = pos ? prev.lower_coeffs(j) : prev.upper_coeffs(j);
                auto src_hi = pos ? prev.upper_coeffs(j) : prev.lower_coeffs(j);
                for (std::size_t d = 0; d < k; ++d) {
                    lo_c[d] += wj * src_lo[d];
                    hi_c[d] += wj * src_hi[d];
                }
                lo_b += wj * (pos ? prev.lower_bias(j) : prev.upper_bias(j));
                hi_b += wj * (pos ? prev.upper_bias(j) : prev.lower_bias(j));
            }
            cur.lower_bias(i) = lo_b;
            cur.upper_bias(i) = hi_b;

            Interval sym;
            sym.lo = interval_dot(lo_c, box, lo_b).lo;
            sym.hi = interval_dot(hi_c, box, hi_b).hi;
            const Interval naive = interval_dot(w, prev.concrete(), layer.biases[i]);
            // An empty intersection can only come from rounding; keep the naive side.
            Interval node = intersect(sym, naive).value_or(naive);

            if (layer.activation == Activation::Relu) {
                if (node.hi <= 0) {
                    std::fill(lo_c.begin(), lo_c.end(), 0.0);
                    std::fill(hi_c.begin(), hi_c.end(), 0.0);
                    cur.lower_bias(i) = 0.0;
                    cur.upper_bias(i) = 0.0;
                } else if (node.lo < 0) {
                    if (mode == Propagator::Slr) {
                        const double scale = node.hi / (node.hi - node.lo);
                        for (auto& c : lo_c) c *= scale;
                        for (auto& c : hi_c) c *= scale;
                        cur.lower_bias(i) = scale * lo_b;
                        cur.upper_bias(i) = scale * (hi_b - node.lo);
                    } else {
                        std::fill(lo_c.begin(), lo_c.end(), 0.0);
                        std::fill(hi_c.begin(), hi_c.end(), 0.0);
                        cur.lower_bias(i) = 0.0;
                        cur.upper_bias(i) = node.hi;
                    }
                }
                node = relu(node);
            }
            cur.concrete(i) = node;
        }
        prev = std::move(cur);
    }

    ReachSet reach;
    reach.outputs = prev.concrete();
    reach.symbolic = std::move(prev);
    return reach;
}

ReachSet propagate(const Network& net, const Box& box, Propagator mode, std::span<const Interval> enclosure) {
    ReachSet reach = mode == Propagator::Naive ? naive_forward(net, box) : symbolic_forward(net, box, mode);
    if (enclosure.empty()) return reach;
    if (enclosure.size() != reach.outputs.size()) throw DimensionMismatch("enclosure does not match the output layer");
    for (std::size_t o = 0; o < reach.outputs.size(); ++o) {
        // Both are sound, so they overlap up to rounding; keep ours if not.
        if (auto both = intersect(reach.outputs[o], enclosure[o])) reach.outputs[o] = *both;
    }
    return reach;
}

std::vector<Interval> concretize_forms(const SymbolicBounds& bounds, const Box& box) {
    if (bounds.input_size() != box.size()) throw DimensionMismatch("concretize_forms: box dimensionality differs");
    std::vector<Interval> out(bounds.nodes());
    for (std::size_t i = 0; i < bounds.nodes(); ++i) {
        out[i].lo = interval_dot(bounds.lower_coeffs(i), box, bounds.lower_bias(i)).lo;
        out[i].hi = interval_dot(bounds.upper_coeffs(i), box, bounds.upper_bias(i)).hi;
    }
    return out;
}

}  // namespace reachcount
