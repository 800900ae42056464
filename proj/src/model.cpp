#include "reachcount/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reachcount/errors.hpp"

namespace reachcount {

using nlohmann::json;

std::string to_string(Activation act) {
    return act == Activation::Relu ? "relu" : "identity";
}

Network::Network(std::size_t input_size, std::vector<AffineLayer> layers)
    : input_size_(input_size), layers_(std::move(layers)) {
    if (input_size_ == 0) throw MalformedModel("network input size must be positive");
    if (layers_.empty()) throw MalformedModel("network has no layers");

    std::size_t prev = input_size_;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& layer = layers_[l];
        if (layer.rows == 0) throw MalformedModel("layer " + std::to_string(l) + " has no nodes");
        if (layer.cols != prev) {
            throw DimensionMismatch("layer " + std::to_string(l) + " expects " + std::to_string(layer.cols) +
                                    " inputs but previous layer has " + std::to_string(prev));
        }
        if (layer.weights.size() != layer.rows * layer.cols) {
            throw DimensionMismatch("layer " + std::to_string(l) + " weight storage does not match its shape");
        }
        if (layer.biases.size() != layer.rows) {
            throw DimensionMismatch("layer " + std::to_string(l) + " has " + std::to_string(layer.biases.size()) +
                                    " biases for " + std::to_string(layer.rows) + " nodes");
        }
        const bool last = l + 1 == layers_.size();
        if (last && layer.activation != Activation::Identity) {
            throw MalformedModel("output layer must use the identity activation");
        }
        if (!last && layer.activation != Activation::Relu) {
            throw MalformedModel("hidden layer " + std::to_string(l) + " must use relu");
        }
        auto finite = [](double v) { return std::isfinite(v); };
        if (!std::all_of(layer.weights.begin(), layer.weights.end(), finite) ||
            !std::all_of(layer.biases.begin(), layer.biases.end(), finite)) {
            throw NonFiniteWeight("layer " + std::to_string(l) + " contains a non-finite value");
        }
        max_layer_size_ = std::max(max_layer_size_, layer.rows);
        prev = layer.rows;
    }
}

std::vector<double> Network::forward(std::span<const double> x) const {
    std::vector<double> scratch;
    auto out = forward(x, scratch);
    return {out.begin(), out.end()};
}

std::span<const double> Network::forward(std::span<const double> x, std::vector<double>& scratch) const {
    if (x.size() != input_size_) {
        throw DimensionMismatch("forward: expected " + std::to_string(input_size_) + " inputs, got " +
                                std::to_string(x.size()));
    }
    // Two ping-pong halves of max_layer_size each.
    scratch.resize(2 * std::max(max_layer_size_, input_size_));
    double* cur = scratch.data();
    double* nxt = scratch.data() + scratch.size() / 2;
    std::copy(x.begin(), x.end(), cur);

    for (const auto& layer : layers_) {
        for (std::size_t i = 0; i < layer.rows; ++i) {
            const double* w = layer.weights.data() + i * layer.cols;
            double acc = layer.biases[i];
            for (std::size_t j = 0; j < layer.cols; ++j) acc += w[j] * cur[j];
            nxt[i] = (layer.activation == Activation::Relu) ? std::max(acc, 0.0) : acc;
        }
        std::swap(cur, nxt);
    }
    return {cur, output_size()};
}

namespace {

std::string read_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedModel(std::string("cannot open ") + what + " file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Activation parse_activation(const std::string& name) {
    if (name == "relu") return Activation::Relu;
    if (name == "identity" || name == "linear") return Activation::Identity;
    throw MalformedModel("unsupported activation '" + name + "'");
}

}  // namespace

Network network_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::out_of_range& e) {
        throw NonFiniteWeight(std::string("model contains a number outside double range: ") + e.what());
    } catch (const json::exception& e) {
        throw MalformedModel(std::string("model is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("layers") || !doc["layers"].is_array() || doc["layers"].empty()) {
        throw MalformedModel("model document needs a non-empty 'layers' array");
    }

    try {
        std::vector<AffineLayer> layers;
        for (const auto& jl : doc["layers"]) {
            const auto& w = jl.at("weights");
            const auto& b = jl.at("biases");
            if (!w.is_array() || w.empty() || !b.is_array()) throw MalformedModel("layer weights/biases must be arrays");
            AffineLayer layer;
            layer.rows = w.size();
            layer.cols = w[0].size();
            layer.activation = parse_activation(jl.value("activation", std::string("relu")));
            layer.weights.reserve(layer.rows * layer.cols);
            for (const auto& row : w) {
                if (!row.is_array()) throw MalformedModel("weight rows must be arrays");
                if (row.size() != layer.cols) throw DimensionMismatch("ragged weight matrix");
                for (const auto& v : row) layer.weights.push_back(v.get<double>());
            }
            for (const auto& v : b) layer.biases.push_back(v.get<double>());
            layers.push_back(std::move(layer));
        }
        std::size_t input_size = layers.front().cols;
        if (doc.contains("input_size")) {
            input_size = doc["input_size"].get<std::size_t>();
        }
        return Network(input_size, std::move(layers));
    } catch (const json::exception& e) {
        throw MalformedModel(std::string("model schema violation: ") + e.what());
    }
}

Network load_json(const std::filesystem::path& path) {
    return network_from_json_text(read_file(path, "model"));
}

std::string network_to_json_text(const Network& net) {
    json doc;
    doc["input_size"] = net.input_size();
    json layers = json::array();
    for (const auto& layer : net.layers()) {
        json w = json::array();
        for (std::size_t i = 0; i < layer.rows; ++i) {
            auto r = layer.row(i);
            w.push_back(std::vector<double>(r.begin(), r.end()));
        }
        layers.push_back({{"weights", w}, {"biases", layer.biases}, {"activation", to_string(layer.activation)}});
    }
    doc["layers"] = std::move(layers);
    return doc.dump();
}

void save_json(const Network& net, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << network_to_json_text(net) << '\n';
}

namespace {

// Reads comma-separated numeric rows, skipping "//" comments and blank lines.
class NNetReader {
public:
    explicit NNetReader(const std::string& text) : in_(text) {}

    std::vector<double> next_row(const char* what) {
        std::string line;
        while (std::getline(in_, line)) {
            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            if (line.compare(first, 2, "//") == 0) continue;
            return split(line, what);
        }
        throw MalformedModel(std::string("NNet file truncated while reading ") + what);
    }

private:
    static std::vector<double> split(const std::string& line, const char* what) {
        std::vector<double> values;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            auto b = tok.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            auto e = tok.find_last_not_of(" \t\r");
            std::string t = tok.substr(b, e - b + 1);
            try {
                std::size_t used = 0;
                double v = std::stod(t, &used);
                if (used != t.size()) throw std::invalid_argument(t);
                values.push_back(v);
            } catch (const std::exception&) {
                throw MalformedModel(std::string("bad number '") + t + "' in NNet " + what);
            }
        }
        if (values.empty()) throw MalformedModel(std::string("empty NNet row in ") + what);
        return values;
    }

    std::istringstream in_;
};

std::size_t as_count(double v, const char* what) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) {
        throw MalformedModel(std::string("NNet header field ") + what + " is not a positive integer");
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

Network network_from_nnet_text(const std::string& text) {
    NNetReader reader(text);
    auto header = reader.next_row("header");
    if (header.size() < 4) throw MalformedModel("NNet header needs numLayers,inputSize,outputSize,maxLayerSize");
    const std::size_t num_layers = as_count(header[0], "numLayers");
    const std::size_t input_size = as_count(header[1], "inputSize");
    const std::size_t output_size = as_count(header[2], "outputSize");
    const std::size_t max_layer = as_count(header[3], "maxLayerSize");

    auto sizes_row = reader.next_row("layer sizes");
    if (sizes_row.size() < num_layers + 1) throw MalformedModel("NNet layer sizes line is too short");
    std::vector<std::size_t> sizes;
    for (std::size_t i = 0; i <= num_layers; ++i) sizes.push_back(as_count(sizes_row[i], "layerSize"));
    if (sizes.front() != input_size || sizes.back() != output_size) {
        throw DimensionMismatch("NNet layer sizes disagree with declared input/output sizes");
    }
    if (*std::max_element(sizes.begin(), sizes.end()) != max_layer) {
        throw DimensionMismatch("NNet maxLayerSize disagrees with layer sizes");
    }

    // Symmetric flag, then mins, maxes, means, ranges. Parsed, not applied.
    for (const char* what : {"symmetric flag", "input minimums", "input maximums", "means", "ranges"}) {
        reader.next_row(what);
    }

    std::vector<AffineLayer> layers;
    for (std::size_t l = 0; l < num_layers; ++l) {
        AffineLayer layer;
        layer.rows = sizes[l + 1];
        layer.cols = sizes[l];
        layer.activation = (l + 1 == num_layers) ? Activation::Identity : Activation::Relu;
        layer.weights.reserve(layer.rows * layer.cols);
        for (std::size_t i = 0; i < layer.rows; ++i) {
            auto row = reader.next_row("weights");
            if (row.size() != layer.cols) {
                throw DimensionMismatch("NNet layer " + std::to_string(l) + " weight row has " +
                                        std::to_string(row.size()) + " entries, expected " +
                                        std::to_string(layer.cols));
            }
            layer.weights.insert(layer.weights.end(), row.begin(), row.end());
        }
        for (std::size_t i = 0; i < layer.rows; ++i) {
            auto row = reader.next_row("biases");
            if (row.size() != 1) throw DimensionMismatch("NNet bias line must hold exactly one value");
            layer.biases.push_back(row[0]);
        }
        layers.push_back(std::move(layer));
    }
    return Network(input_size, std::move(layers));
}

Network load_nnet(const std::filesystem::path& path) {
    return network_from_nnet_text(read_file(path, "NNet"));
}

void save_nnet(const Network& net, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out.precision(17);
    out << "// written by reachcount\n";
    out << net.layers().size() << ',' << net.input_size() << ',' << net.output_size() << ','
        << net.max_layer_size() << ",\n";
    out << net.input_size() << ',';
    for (const auto& layer : net.layers()) out << layer.rows << ',';
    out << "\n0,\n";
    auto repeat = [&](double v, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) out << v << ',';
        out << '\n';
    };
    repeat(-1e9, net.input_size());
    repeat(1e9, net.input_size());
    repeat(0.0, net.input_size() + 1);
    repeat(1.0, net.input_size() + 1);
    for (const auto& layer : net.layers()) {
        for (std::size_t i = 0; i < layer.rows; ++i) {
            for (double w : layer.row(i)) out << w << ',';
            out << '\n';
        }
        for (double b : layer.biases) out << b << ",\n";
    }
}

Network load_network(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".nnet" ? load_nnet(path) : load_json(path);
}

}  // namespace reachcount
