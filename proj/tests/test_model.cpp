#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "reachcount/errors.hpp"
#include "reachcount/model.hpp"
#include "support/corpus.hpp"

using namespace reachcount;
using namespace reachcount::testing;

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

// y = x written by hand in NNet layout.
const char* kIdentityNnet = R"(// identity network
// second comment line
1,1,1,1,
1,1,
0,
0.0,
1.0,
0.0,0.0,
1.0,1.0,
1.0,
0.0,
)";

std::string nnet_text(const Network& net) {
    auto p = temp_path("roundtrip.nnet");
    save_nnet(net, p);
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("load_json identity document") {
    auto p = temp_path("identity.json");
    write_file(p, R"({"layers":[{"weights":[[1.0]],"biases":[0.0],"activation":"identity"}]})");
    Network net = load_json(p);
    CHECK(net.input_size() == 1);
    CHECK(net.output_size() == 1);
    CHECK(net.max_layer_size() == 1);
    CHECK(net.forward(std::vector<double>{0.7})[0] == 0.7);
}

TEST_CASE("load_json rejects inconsistent dimensions") {
    const std::string doc = R"({"input_size":2,"layers":[
        {"weights":[[1,0],[0,1]],"biases":[0,0],"activation":"relu"},
        {"weights":[[1,1,1]],"biases":[0],"activation":"identity"}]})";
    CHECK_THROWS_AS(network_from_json_text(doc), DimensionMismatch);
    CHECK_THROWS_AS(network_from_json_text(R"({"layers":[{"weights":[[1]],"biases":[0,1],"activation":"identity"}]})"),
                    DimensionMismatch);
    CHECK_THROWS_AS(network_from_json_text(R"({"input_size":3,"layers":[{"weights":[[1,2]],"biases":[0],"activation":"identity"}]})"),
                    DimensionMismatch);
}

TEST_CASE("load_json rejects malformed documents") {
    CHECK_THROWS_AS(network_from_json_text("not json"), MalformedModel);
    CHECK_THROWS_AS(network_from_json_text(R"({"layers":[]})"), MalformedModel);
    CHECK_THROWS_AS(network_from_json_text(R"({"layers":[{"weights":[[1]],"biases":[0],"activation":"tanh"}]})"),
                    MalformedModel);
    CHECK_THROWS_AS(network_from_json_text(R"({"layers":[{"weights":[[1]],"biases":[0],"activation":"relu"}]})"),
                    MalformedModel);
    CHECK_THROWS_AS(network_from_json_text(R"({"layers":[{"weights":[["a"]],"biases":[0],"activation":"identity"}]})"),
                    MalformedModel);
    CHECK_THROWS_AS(load_json(temp_path("does_not_exist.json")), MalformedModel);
}

TEST_CASE("hidden identity layers are rejected") {
    const std::string doc = R"({"layers":[
        {"weights":[[1]],"biases":[0],"activation":"identity"},
        {"weights":[[1]],"biases":[0],"activation":"identity"}]})";
    CHECK_THROWS_AS(network_from_json_text(doc), MalformedModel);
}

TEST_CASE("non-finite weights are rejected") {
    AffineLayer l;
    l.rows = 1;
    l.cols = 1;
    l.weights = {std::nan("")};
    l.biases = {0.0};
    CHECK_THROWS_AS(Network(1, {l}), NonFiniteWeight);
    l.weights = {1.0};
    l.biases = {INFINITY};
    CHECK_THROWS_AS(Network(1, {l}), NonFiniteWeight);
    CHECK_THROWS_AS(network_from_json_text(R"({"layers":[{"weights":[[1e999]],"biases":[0],"activation":"identity"}]})"),
                    NonFiniteWeight);
}

TEST_CASE("9-16-16-3 navigation-shaped model") {
    std::mt19937_64 rng(99);
    Network net = random_net(rng, 9, {16, 16}, 3);
    auto p = temp_path("nav.json");
    save_json(net, p);
    Network back = load_json(p);
    CHECK(back.input_size() == 9);
    CHECK(back.output_size() == 3);
    CHECK(back.max_layer_size() == 16);
}

TEST_CASE("JSON round trip is bit-exact") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        Network net = random_net(rng, 3, {16, 7}, 2);
        Network back = network_from_json_text(network_to_json_text(net));
        REQUIRE(back.layers().size() == net.layers().size());
        for (std::size_t l = 0; l < net.layers().size(); ++l) {
            CHECK(back.layers()[l].weights == net.layers()[l].weights);
            CHECK(back.layers()[l].biases == net.layers()[l].biases);
            CHECK(back.layers()[l].activation == net.layers()[l].activation);
        }
    }
}

TEST_CASE("load_nnet on an ACAS-shaped file") {
    std::mt19937_64 rng(5);
    Network net = random_net(rng, 5, {50, 50, 50, 50, 50, 50}, 5);
    auto p = temp_path("acas_like.nnet");
    save_nnet(net, p);
    Network back = load_nnet(p);
    CHECK(back.input_size() == 5);
    CHECK(back.output_size() == 5);
    REQUIRE(back.layers().size() == 7);
    for (std::size_t l = 0; l < 6; ++l) {
        CHECK(back.layers()[l].rows == 50);
        CHECK(back.layers()[l].activation == Activation::Relu);
    }
    CHECK(back.max_layer_size() == 50);
    for (std::size_t l = 0; l < net.layers().size(); ++l) CHECK(back.layers()[l].weights == net.layers()[l].weights);
    CHECK(load_network(p).input_size() == 5);
}

TEST_CASE("hand-written NNet identity matches the JSON identity") {
    Network a = network_from_nnet_text(kIdentityNnet);
    Network b = network_from_json_text(R"({"layers":[{"weights":[[1.0]],"biases":[0.0],"activation":"identity"}]})");
    REQUIRE(a.layers().size() == 1);
    CHECK(a.input_size() == b.input_size());
    CHECK(a.layers()[0].weights == b.layers()[0].weights);
    CHECK(a.layers()[0].biases == b.layers()[0].biases);
    CHECK(a.layers()[0].activation == Activation::Identity);
}

TEST_CASE("truncated NNet is malformed") {
    std::mt19937_64 rng(3);
    Network net = random_net(rng, 2, {4}, 1);
    std::string text = nnet_text(net);
    // Drop the final bias line.
    text.pop_back();
    text = text.substr(0, text.find_last_of('\n') + 1);
    CHECK_THROWS_AS(network_from_nnet_text(text), MalformedModel);
    CHECK_THROWS_AS(network_from_nnet_text("// only a comment\n"), MalformedModel);
    CHECK_THROWS_AS(network_from_nnet_text("2,1,1,4,\n1,4,\n"), MalformedModel);
}

TEST_CASE("NNet header dimensions must agree") {
    // Header says input 2 but layer sizes line says 1.
    const char* bad = "1,2,1,1,\n1,1,\n0,\n0,\n1,\n0,0,\n1,1,\n1.0,\n0.0,\n";
    CHECK_THROWS_AS(network_from_nnet_text(bad), DimensionMismatch);
}

TEST_CASE("forward examples") {
    CHECK(identity_net().forward(std::vector<double>{0.7})[0] == 0.7);
    CHECK(relu_net().forward(std::vector<double>{-2.0})[0] == 0.0);
    CHECK_THROWS_AS(identity_net().forward(std::vector<double>{1.0, 2.0}), DimensionMismatch);
}

TEST_CASE("forward matches the matrix-multiply oracle") {
    std::mt19937_64 rng(1234);
    Network net = random_net(rng, 3, {16, 16}, 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> scratch;
    for (int i = 0; i < 10; ++i) {
        std::vector<double> x{u(rng), u(rng), u(rng)};
        auto y = net.forward(x);
        auto ref = oracle_forward(net, x);
        CHECK(y[0] == doctest::Approx(ref[0]).epsilon(1e-12));
        CHECK(net.forward(x, scratch)[0] == y[0]);
        CHECK_FALSE(std::isnan(y[0]));
    }
}
