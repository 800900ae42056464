#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "reachcount/approx.hpp"
#include "reachcount/bab.hpp"
#include "reachcount/cli.hpp"
#include "reachcount/counting.hpp"
#include "reachcount/errors.hpp"
#include "reachcount/geometry.hpp"
#include "reachcount/model.hpp"
#include "reachcount/property.hpp"
#include "reachcount/propagation.hpp"

namespace py = pybind11;
using namespace reachcount;

namespace {

Box box_from(const std::vector<std::pair<double, double>>& dims) {
    std::vector<Interval> out;
    out.reserve(dims.size());
    for (const auto& [lo, hi] : dims) out.emplace_back(lo, hi);
    return Box(std::move(out));
}

std::vector<std::pair<double, double>> pairs(const std::vector<Interval>& ivs) {
    std::vector<std::pair<double, double>> out;
    for (const auto& iv : ivs) out.emplace_back(iv.lo, iv.hi);
    return out;
}

}  // namespace

PYBIND11_MODULE(_reachcount, m) {
    m.doc() = "Reachability-based violation-rate counting for ReLU networks.";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto input = py::register_exception<InputError>(m, "InputError", base.ptr());
    py::register_exception<MalformedModel>(m, "MalformedModel", input.ptr());
    py::register_exception<MalformedProperty>(m, "MalformedProperty", input.ptr());
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", input.ptr());
    py::register_exception<NonFiniteWeight>(m, "NonFiniteWeight", input.ptr());
    py::register_exception<IndexOutOfRange>(m, "IndexOutOfRange", input.ptr());
    py::register_exception<GridTooLarge>(m, "GridTooLarge", input.ptr());
    py::register_exception<InvalidEpsilon>(m, "InvalidEpsilon", input.ptr());
    py::register_exception<DegenerateDimension>(m, "DegenerateDimension", base.ptr());
    py::register_exception<NotContained>(m, "NotContained", base.ptr());
    py::register_exception<InvalidBounds>(m, "InvalidBounds", base.ptr());
    py::register_exception<InvalidConfig>(m, "InvalidConfig", base.ptr());

    py::class_<Network>(m, "Network")
        .def_property_readonly("input_size", &Network::input_size)
        .def_property_readonly("output_size", &Network::output_size)
        .def_property_readonly("max_layer_size", &Network::max_layer_size)
        .def_property_readonly("layer_sizes",
                               [](const Network& n) {
                                   std::vector<std::size_t> sizes;
                                   for (const auto& l : n.layers()) sizes.push_back(l.rows);
                                   return sizes;
                               })
        .def("forward", [](const Network& n, const std::vector<double>& x) { return n.forward(x); })
        .def("to_json", &network_to_json_text)
        .def_static("from_json", &network_from_json_text)
        .def_static("from_nnet", &network_from_nnet_text);

    m.def("load_json", &load_json, py::arg("path"));
    m.def("load_nnet", &load_nnet, py::arg("path"));
    m.def("load_network", &load_network, py::arg("path"));
    m.def("save_json", &save_json, py::arg("net"), py::arg("path"));

    m.def("bisect", [](const std::vector<std::pair<double, double>>& box, std::size_t dim) {
        auto [l, r] = bisect(box_from(box), dim);
        return std::make_pair(pairs(l.dims()), pairs(r.dims()));
    });
    m.def("widest_dim", [](const std::vector<std::pair<double, double>>& box) { return widest_dim(box_from(box)); });
    m.def("volume_fraction", [](const std::vector<std::pair<double, double>>& sub,
                                const std::vector<std::pair<double, double>>& parent) {
        return volume_fraction(box_from(sub), box_from(parent));
    });
    m.def("interval_dot", [](const std::vector<double>& coeffs, const std::vector<std::pair<double, double>>& box,
                             double bias) {
        auto iv = interval_dot(coeffs, box_from(box), bias);
        return std::make_pair(iv.lo, iv.hi);
    });

    py::enum_<Propagator>(m, "Propagator")
        .value("NAIVE", Propagator::Naive)
        .value("SIP", Propagator::Sip)
        .value("SLR", Propagator::Slr);

    m.def(
        "reach",
        [](const Network& net, const std::vector<std::pair<double, double>>& box, Propagator p) {
            return pairs(propagate(net, box_from(box), p).outputs);
        },
        py::arg("net"), py::arg("box"), py::arg("propagator") = Propagator::Slr,
        "Output intervals of the network over the box.");

    py::enum_<Verdict>(m, "Verdict")
        .value("SAFE", Verdict::Safe)
        .value("VIOLATING", Verdict::Violating)
        .value("UNKNOWN", Verdict::Unknown);

    py::class_<SafetyProperty>(m, "SafetyProperty")
        .def_property_readonly("precondition", [](const SafetyProperty& p) { return pairs(p.precondition.dims()); })
        .def_property_readonly("clause_count", [](const SafetyProperty& p) { return p.clauses.size(); })
        .def("holds", [](const SafetyProperty& p, const std::vector<double>& y) { return p.holds(y); })
        .def("to_json", &property_to_json_text)
        .def_static(
            "from_json",
            [](const std::string& text, std::optional<std::pair<std::size_t, std::size_t>> shape) {
                std::optional<PropertyShape> s;
                if (shape) s = PropertyShape{shape->first, shape->second};
                return property_from_json_text(text, s);
            },
            py::arg("text"), py::arg("shape") = py::none());

    m.def(
        "parse_property",
        [](const std::filesystem::path& path, const Network* net) {
            std::optional<PropertyShape> s;
            if (net) s = PropertyShape{net->input_size(), net->output_size()};
            return parse_property(path, s);
        },
        py::arg("path"), py::arg("net") = nullptr);

    m.def(
        "classify",
        [](const Network& net, const SafetyProperty& prop, Propagator p) {
            return classify(propagate(net, prop.precondition, p), prop, prop.precondition);
        },
        py::arg("net"), py::arg("prop"), py::arg("propagator") = Propagator::Slr);

    py::class_<BabConfig>(m, "BabConfig")
        .def(py::init([](std::size_t max_depth, std::size_t chunk_size, std::size_t workers, Propagator p,
                         std::optional<double> timeout_s) {
                 BabConfig c;
                 c.max_depth = max_depth;
                 c.chunk_size = chunk_size;
                 c.workers = workers;
                 c.propagator = p;
                 if (timeout_s) c.timeout = std::chrono::duration<double>(*timeout_s);
                 return c;
             }),
             py::arg("max_depth") = 20, py::arg("chunk_size") = 4096, py::arg("workers") = 1,
             py::arg("propagator") = Propagator::Slr, py::arg("timeout_s") = py::none())
        .def_readwrite("max_depth", &BabConfig::max_depth)
        .def_readwrite("chunk_size", &BabConfig::chunk_size)
        .def_readwrite("workers", &BabConfig::workers)
        .def_readwrite("propagator", &BabConfig::propagator);

    py::class_<VrResult>(m, "VrResult")
        .def_readonly("vr_lb", &VrResult::vr_lb)
        .def_readonly("vr_ub", &VrResult::vr_ub)
        .def_readonly("exact", &VrResult::exact)
        .def_readonly("timed_out", &VrResult::timed_out)
        .def_readonly("nodes_explored", &VrResult::nodes_explored)
        .def_readonly("max_depth_reached", &VrResult::max_depth_reached)
        .def_readonly("residual_volume", &VrResult::residual_volume)
        .def_readonly("violating_points", &VrResult::violating_points)
        .def_readonly("total_points", &VrResult::total_points)
        .def_property_readonly("wall_time_s", [](const VrResult& r) { return r.wall_time.count(); });

    m.def("exact_count", &exact_count, py::arg("net"), py::arg("prop"), py::arg("cfg") = BabConfig{});
    m.def(
        "exact_count_discrete",
        [](const Network& net, const SafetyProperty& prop, const std::vector<std::uint64_t>& grid,
           const BabConfig& cfg) {
            auto spec = grid.size() == 1 ? GridSpec::uniform(prop.input_size(), grid[0]) : GridSpec(grid);
            return exact_count_discrete(net, prop, spec, cfg);
        },
        py::arg("net"), py::arg("prop"), py::arg("grid"), py::arg("cfg") = BabConfig{});
    m.def(
        "brute_force_vr",
        [](const Network& net, const SafetyProperty& prop, const std::vector<std::uint64_t>& grid) {
            auto spec = grid.size() == 1 ? GridSpec::uniform(prop.input_size(), grid[0]) : GridSpec(grid);
            return brute_force_vr(net, prop, spec);
        },
        py::arg("net"), py::arg("prop"), py::arg("grid"));

    py::class_<EstimateResult>(m, "EstimateResult")
        .def_readonly("point_estimate", &EstimateResult::point_estimate)
        .def_readonly("lower_bound", &EstimateResult::lower_bound)
        .def_readonly("confidence", &EstimateResult::confidence)
        .def_readonly("per_run_estimates", &EstimateResult::per_run_estimates)
        .def_readonly("samples_used", &EstimateResult::samples_used)
        .def_readonly("violating_samples", &EstimateResult::violating_samples);

    m.def(
        "split_estimate",
        [](const Network& net, const SafetyProperty& prop, std::size_t splits, std::size_t samples_per_split,
           std::size_t runs, double confidence, std::uint64_t seed, const BabConfig& backend) {
            SplitEstimateConfig cfg{splits, samples_per_split, runs, confidence, seed, backend};
            return split_estimate(net, prop, cfg);
        },
        py::arg("net"), py::arg("prop"), py::arg("splits") = 0, py::arg("samples_per_split") = 100,
        py::arg("runs") = 1, py::arg("confidence") = 0.99, py::arg("seed") = 0, py::arg("backend") = BabConfig{});
    m.def("mc_estimate", &mc_estimate, py::arg("net"), py::arg("prop"), py::arg("n_samples"),
          py::arg("confidence") = 0.99, py::arg("seed") = 0);
    m.def("build_tiny_vr_net", &build_tiny_vr_net, py::arg("epsilon"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<const char*> argv{"reachcount"};
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out;
            std::ostringstream err;
            int code;
            {
                py::gil_scoped_release release;
                code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");

    m.attr("__version__") = kToolVersion;
}
