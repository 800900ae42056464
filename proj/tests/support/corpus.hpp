#pragma once

// Test-only helpers: seeded random networks and properties, plus oracles
// that deliberately share no code with the propagation engine.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "reachcount/geometry.hpp"
#include "reachcount/model.hpp"
#include "reachcount/property.hpp"

namespace reachcount::testing {

inline Network random_net(std::mt19937_64& rng, std::size_t inputs, const std::vector<std::size_t>& hidden,
                          std::size_t outputs) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<AffineLayer> layers;
    std::size_t prev = inputs;
    std::vector<std::size_t> sizes = hidden;
    sizes.push_back(outputs);
    for (std::size_t l = 0; l < sizes.size(); ++l) {
        AffineLayer layer;
        layer.rows = sizes[l];
        layer.cols = prev;
        layer.activation = l + 1 == sizes.size() ? Activation::Identity : Activation::Relu;
        const double scale = 1.0 / std::sqrt(static_cast<double>(prev));
        for (std::size_t i = 0; i < layer.rows * layer.cols; ++i) layer.weights.push_back(gauss(rng) * scale);
        for (std::size_t i = 0; i < layer.rows; ++i) layer.biases.push_back(0.3 * gauss(rng));
        prev = layer.rows;
        layers.push_back(std::move(layer));
    }
    return Network(inputs, std::move(layers));
}

inline std::vector<double> sample_point(std::mt19937_64& rng, const Box& box) {
    std::vector<double> x(box.size());
    for (std::size_t d = 0; d < box.size(); ++d) {
        std::uniform_real_distribution<double> u(box[d].lo, box[d].hi);
        x[d] = box[d].degenerate() ? box[d].lo : std::clamp(u(rng), box[d].lo, box[d].hi);
    }
    return x;
}

inline Box random_box(std::mt19937_64& rng, std::size_t k, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Interval> dims;
    for (std::size_t d = 0; d < k; ++d) {
        double a = u(rng);
        double b = u(rng);
        if (a > b) std::swap(a, b);
        if (b - a < 0.05) b = a + 0.05;
        dims.emplace_back(a, b);
    }
    return Box(std::move(dims));
}

/// Independent forward pass: straightforward nested loops over the layer
/// matrices, written without reusing Network::forward.
inline std::vector<double> oracle_forward(const Network& net, const std::vector<double>& x) {
    std::vector<double> a = x;
    for (const auto& layer : net.layers()) {
        std::vector<double> z(layer.rows);
        for (std::size_t i = 0; i < layer.rows; ++i) {
            long double s = layer.biases[i];
            for (std::size_t j = 0; j < layer.cols; ++j) s += static_cast<long double>(layer.weight(i, j)) * a[j];
            z[i] = static_cast<double>(s);
            if (layer.activation == Activation::Relu && z[i] < 0) z[i] = 0;
        }
        a = std::move(z);
    }
    return a;
}

/// Min/max of an affine form over all 2^k box vertices.
inline Interval vertex_range(const std::vector<double>& coeffs, const Box& box, double bias) {
    const std::size_t k = box.size();
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
        long double v = bias;
        for (std::size_t d = 0; d < k; ++d) v += static_cast<long double>(coeffs[d]) * ((mask >> d) & 1 ? box[d].hi : box[d].lo);
        lo = std::min(lo, static_cast<double>(v));
        hi = std::max(hi, static_cast<double>(v));
    }
    Interval out;
    out.lo = lo;
    out.hi = hi;
    return out;
}

struct Instance {
    Network net;
    SafetyProperty prop;
    std::string label;
};

inline Atom single_output_atom(std::size_t outputs, std::size_t j, double sign, double bias) {
    Atom a;
    a.coeffs.assign(outputs, 0.0);
    a.coeffs[j] = 1.0;
    a.op = sign > 0 ? Comparison::Ge : Comparison::Le;
    a.bias = bias;
    return a;
}

/// Random corpus: 2-3 inputs, up to two hidden ReLU layers of at most 16
/// nodes, single-atom thresholds placed at an output quantile, or argmax
/// properties on multi-output nets.
inline Instance make_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed * 7919 + 17);
    std::uniform_int_distribution<int> in_dist(2, 3);
    std::uniform_int_distribution<int> depth_dist(1, 2);
    std::uniform_int_distribution<int> width_dist(4, 16);
    std::uniform_int_distribution<int> out_dist(1, 3);
    const std::size_t k = static_cast<std::size_t>(in_dist(rng));
    std::vector<std::size_t> hidden(static_cast<std::size_t>(depth_dist(rng)));
    for (auto& h : hidden) h = static_cast<std::size_t>(width_dist(rng));
    const std::size_t outputs = static_cast<std::size_t>(out_dist(rng));
    Network net = random_net(rng, k, hidden, outputs);
    Box box = random_box(rng, k);

    SafetyProperty prop;
    prop.precondition = box;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::string label = "seed" + std::to_string(seed) + " k" + std::to_string(k) + " out" + std::to_string(outputs);
    if (outputs >= 2 && u01(rng) < 0.5) {
        const auto kind = u01(rng) < 0.5 ? ArgmaxKind::IsNotMax : ArgmaxKind::IsMax;
        const std::size_t idx = std::uniform_int_distribution<std::size_t>(0, outputs - 1)(rng);
        prop.clauses = desugar_argmax(kind, idx, outputs);
        label += kind == ArgmaxKind::IsNotMax ? " is_not_max" : " is_max";
    } else {
        const std::size_t j = std::uniform_int_distribution<std::size_t>(0, outputs - 1)(rng);
        std::vector<double> ys;
        for (int s = 0; s < 400; ++s) ys.push_back(net.forward(sample_point(rng, box))[j]);
        std::sort(ys.begin(), ys.end());
        const double q = 0.15 + 0.7 * u01(rng);
        const double threshold = ys[static_cast<std::size_t>(q * (ys.size() - 1))];
        const double sign = u01(rng) < 0.5 ? 1.0 : -1.0;
        prop.clauses = {{single_output_atom(outputs, j, sign, threshold)}};
        label += " atom";
    }
    return Instance{std::move(net), std::move(prop), label};
}

inline std::vector<Instance> make_corpus(std::size_t count, std::uint64_t first_seed = 1) {
    std::vector<Instance> corpus;
    for (std::size_t i = 0; i < count; ++i) corpus.push_back(make_instance(first_seed + i));
    return corpus;
}

/// y = x on one input.
inline Network identity_net() {
    AffineLayer l;
    l.rows = 1;
    l.cols = 1;
    l.weights = {1.0};
    l.biases = {0.0};
    l.activation = Activation::Identity;
    return Network(1, {l});
}

/// y = relu(x) - x, written as relu(x) - relu(x + 1) + 1 (the second unit is
/// always active on [-1, 1]).
inline Network dependency_net() {
    AffineLayer h;
    h.rows = 2;
    h.cols = 1;
    h.weights = {1.0, 1.0};
    h.biases = {0.0, 1.0};
    h.activation = Activation::Relu;
    AffineLayer o;
    o.rows = 1;
    o.cols = 2;
    o.weights = {1.0, -1.0};
    o.biases = {1.0};
    o.activation = Activation::Identity;
    return Network(1, {h, o});
}

/// y = relu(x).
inline Network relu_net() {
    AffineLayer h;
    h.rows = 1;
    h.cols = 1;
    h.weights = {1.0};
    h.biases = {0.0};
    h.activation = Activation::Relu;
    AffineLayer o;
    o.rows = 1;
    o.cols = 1;
    o.weights = {1.0};
    o.biases = {0.0};
    o.activation = Activation::Identity;
    return Network(1, {h, o});
}

inline SafetyProperty threshold_property(Box box, double bias, Comparison op = Comparison::Ge) {
    SafetyProperty p;
    p.precondition = std::move(box);
    p.clauses = {{Atom{{1.0}, bias, op}}};
    return p;
}

inline std::filesystem::path temp_path(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "reachcount_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace reachcount::testing
