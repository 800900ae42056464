#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace reachcount {

enum class Activation { Relu, Identity };

std::string to_string(Activation act);

/// Dense affine map followed by an activation. weights is row-major:
/// weight(i, j) multiplies input j into output i.
struct AffineLayer {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> weights;
    std::vector<double> biases;
    Activation activation = Activation::Identity;

    double weight(std::size_t i, std::size_t j) const { return weights[i * cols + j]; }
    std::span<const double> row(std::size_t i) const { return {weights.data() + i * cols, cols}; }
};

/// Feedforward ReLU network. Hidden layers are ReLU, the last layer is
/// identity. Immutable once constructed.
class Network {
public:
    /// Validates every structural invariant; throws DimensionMismatch,
    /// MalformedModel or NonFiniteWeight.
    Network(std::size_t input_size, std::vector<AffineLayer> layers);

    std::size_t input_size() const { return input_size_; }
    std::size_t output_size() const { return layers_.back().rows; }
    std::size_t max_layer_size() const { return max_layer_size_; }
    const std::vector<AffineLayer>& layers() const { return layers_; }

    /// Exact concrete evaluation.
    std::vector<double> forward(std::span<const double> x) const;

    /// Allocation-free evaluation for hot loops. `scratch` is resized as
    /// needed; the returned span points into it.
    std::span<const double> forward(std::span<const double> x, std::vector<double>& scratch) const;

private:
    std::size_t input_size_;
    std::vector<AffineLayer> layers_;
    std::size_t max_layer_size_ = 0;
};

Network load_json(const std::filesystem::path& path);
Network network_from_json_text(const std::string& text);
std::string network_to_json_text(const Network& net);
void save_json(const Network& net, const std::filesystem::path& path);

/// NNet text format. Normalization lines are read and discarded.
Network load_nnet(const std::filesystem::path& path);
Network network_from_nnet_text(const std::string& text);
/// Writes zero means and unit ranges for the normalization block.
void save_nnet(const Network& net, const std::filesystem::path& path);

/// Picks the loader by extension: ".nnet" is NNet, anything else JSON.
Network load_network(const std::filesystem::path& path);

}  // namespace reachcount
