#include "reachcount/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "reachcount/approx.hpp"
#include "reachcount/counting.hpp"
#include "reachcount/errors.hpp"
#include "reachcount/model.hpp"
#include "reachcount/property.hpp"
#include "reachcount/propagation.hpp"

namespace reachcount {

namespace {

struct Loaded {
    Network net;
    SafetyProperty prop;
};

Loaded load_inputs(const CliOptions& opts) {
    Network net = load_network(opts.model);
    SafetyProperty prop = parse_property(opts.property, PropertyShape{net.input_size(), net.output_size()});
    return {std::move(net), std::move(prop)};
}

VerificationReport base_report(const std::string& mode, const CliOptions& opts) {
    VerificationReport r;
    r.mode = mode;
    r.model_path = opts.model.string();
    r.property_path = opts.property.string();
    r.propagator = to_string(opts.bab.propagator);
    r.workers = opts.bab.workers;
    r.chunk_size = opts.bab.chunk_size;
    return r;
}

void fill_counts(VerificationReport& r, const VrResult& v) {
    r.vr_lb = v.vr_lb;
    r.vr_ub = v.vr_ub;
    r.exact = v.exact;
    r.timed_out = v.timed_out;
    r.nodes_explored = v.nodes_explored;
    r.max_depth_reached = v.max_depth_reached;
    r.residual_volume = v.residual_volume;
    r.violating_points = v.violating_points;
    r.total_points = v.total_points;
    r.wall_time_ms = v.wall_time.count() * 1e3;
}

GridSpec make_grid(const CliOptions& opts, std::size_t dims) {
    if (opts.grid.size() == 1) return GridSpec::uniform(dims, opts.grid.front());
    if (opts.grid.size() != dims) {
        throw InvalidConfig("--grid lists " + std::to_string(opts.grid.size()) + " counts for a " +
                            std::to_string(dims) + "-dimensional precondition");
    }
    return GridSpec(opts.grid);
}

}  // namespace

CommandResult cmd_check(const CliOptions& opts) {
    opts.bab.validate();
    const auto start = std::chrono::steady_clock::now();
    auto [net, prop] = load_inputs(opts);
    const auto reach = propagate(net, prop.precondition, opts.bab.propagator);
    const Verdict verdict = classify(reach, prop, prop.precondition);

    CommandResult res;
    res.report = base_report("check", opts);
    res.report.verdict = to_string(verdict);
    res.report.nodes_explored = 1;
    res.report.exact = verdict != Verdict::Unknown;
    res.report.vr_lb = verdict == Verdict::Violating ? 1.0 : 0.0;
    res.report.vr_ub = verdict == Verdict::Safe ? 0.0 : 1.0;
    res.report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    switch (verdict) {
        case Verdict::Safe: res.exit_code = exit_code::kSafe; break;
        case Verdict::Violating: res.exit_code = exit_code::kViolating; break;
        case Verdict::Unknown: res.exit_code = exit_code::kUnknown; break;
    }
    return res;
}

CommandResult cmd_count(const CliOptions& opts) {
    auto [net, prop] = load_inputs(opts);
    CommandResult res;
    res.report = base_report("count", opts);
    fill_counts(res.report, exact_count(net, prop, opts.bab));
    res.exit_code = 0;
    return res;
}

CommandResult cmd_count_discrete(const CliOptions& opts) {
    auto [net, prop] = load_inputs(opts);
    const GridSpec grid = make_grid(opts, prop.input_size());
    CommandResult res;
    res.report = base_report("count-discrete", opts);
    fill_counts(res.report, exact_count_discrete(net, prop, grid, opts.bab));
    res.exit_code = 0;
    return res;
}

CommandResult cmd_approx(const CliOptions& opts) {
    auto [net, prop] = load_inputs(opts);
    SplitEstimateConfig cfg;
    cfg.splits = opts.splits;
    cfg.samples_per_split = opts.samples_per_split;
    cfg.runs = opts.runs;
    cfg.confidence = opts.confidence;
    cfg.seed = opts.seed;
    cfg.backend = opts.bab;
    const auto est = split_estimate(net, prop, cfg);

    CommandResult res;
    auto& r = res.report;
    r = base_report("approx", opts);
    r.vr_lb = est.lower_bound;
    r.point_estimate = est.point_estimate;
    r.seed = opts.seed;
    r.estimator = VerificationReport::Estimator{opts.splits, opts.samples_per_split, opts.runs, std::nullopt,
                                                opts.confidence, est.samples_used};
    r.wall_time_ms = est.wall_time.count() * 1e3;
    res.exit_code = 0;
    return res;
}

CommandResult cmd_sample(const CliOptions& opts) {
    auto [net, prop] = load_inputs(opts);
    const auto est = mc_estimate(net, prop, opts.samples, opts.confidence, opts.seed);

    CommandResult res;
    auto& r = res.report;
    r = base_report("sample", opts);
    r.vr_lb = est.lower_bound;
    r.point_estimate = est.point_estimate;
    r.seed = opts.seed;
    r.violating_points = est.violating_samples;
    r.total_points = est.samples_used;
    r.estimator = VerificationReport::Estimator{std::nullopt, std::nullopt, std::nullopt, opts.samples,
                                                opts.confidence, est.samples_used};
    r.wall_time_ms = est.wall_time.count() * 1e3;
    res.exit_code = 0;
    return res;
}

namespace {

std::vector<std::uint64_t> parse_grid(const std::string& text) {
    std::vector<std::uint64_t> counts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(tok, &used);
            if (used != tok.size() || v < 1) throw std::invalid_argument(tok);
            counts.push_back(static_cast<std::uint64_t>(v));
        } catch (const std::exception&) {
            throw InvalidConfig("--grid expects positive integers N[,N...], got '" + text + "'");
        }
    }
    if (counts.empty()) throw InvalidConfig("--grid is empty");
    return counts;
}

void summarize(std::ostream& err, const VerificationReport& r) {
    err << "reachcount " << r.mode << ": ";
    if (r.verdict) err << *r.verdict << ' ';
    if (r.vr_lb) err << "vr_lb=" << *r.vr_lb << ' ';
    if (r.vr_ub) err << "vr_ub=" << *r.vr_ub << ' ';
    if (r.point_estimate) err << "estimate=" << *r.point_estimate << ' ';
    err << (r.exact ? "exact" : "bounded") << (r.timed_out ? " (timed out)" : "") << ", " << r.nodes_explored
        << " nodes, " << r.wall_time_ms << " ms\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliOptions opts;
    std::string propagator = "slr";
    std::string grid = "17";
    std::optional<double> timeout_s;
    std::string output;
    opts.bab.workers = std::max(1u, std::thread::hardware_concurrency());
    opts.bab.chunk_size = 4096;

    CLI::App app{"Violation-rate counting for feedforward ReLU networks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("model", opts.model, "Network file (.json or .nnet)")->required();
        sub->add_option("property", opts.property, "Property file (JSON)")->required();
        sub->add_option("--propagator", propagator, "Bound propagation: naive, sip or slr")
            ->check(CLI::IsMember({"naive", "sip", "slr"}))
            ->capture_default_str();
        sub->add_option("--max-depth", opts.bab.max_depth, "Maximum number of bisections per box")
            ->capture_default_str();
        sub->add_option("--workers", opts.bab.workers, "Concurrent workers for frontier evaluation")
            ->check(CLI::PositiveNumber);
        sub->add_option("--chunk-size", opts.bab.chunk_size, "Sub-boxes evaluated per batch")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--timeout-s", timeout_s, "Wall-clock budget in seconds")->check(CLI::PositiveNumber);
        sub->add_option("--grid", grid, "Grid points per dimension, N or N,N,...")->capture_default_str();
        sub->add_option("--splits", opts.splits, "Randomized splits before the exact leaf count")
            ->capture_default_str();
        sub->add_option("--runs", opts.runs, "Independent estimator runs")->check(CLI::PositiveNumber);
        sub->add_option("--samples-per-split", opts.samples_per_split, "Samples drawn before each split")
            ->check(CLI::PositiveNumber);
        sub->add_option("--samples", opts.samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
        sub->add_option("--confidence", opts.confidence, "Confidence level in (0,1)")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        sub->add_option("--seed", opts.seed, "Random seed")->capture_default_str();
        sub->add_option("--output", output, "Also write the JSON report to this path");
    };

    auto* check = app.add_subcommand("check", "Classify the whole precondition once (exit 0 safe, 1 violating, 2 unknown)");
    auto* count = app.add_subcommand("count", "Continuous violation-rate bounds by branch and bound");
    auto* count_discrete = app.add_subcommand("count-discrete", "Exact violation rate over a uniform grid");
    auto* approx = app.add_subcommand("approx", "Randomized split-and-multiply estimate");
    auto* sample = app.add_subcommand("sample", "Monte Carlo estimate with a Hoeffding lower bound");
    for (auto* sub : {check, count, count_discrete, approx, sample}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_code::kUsage;
    }

    try {
        opts.bab.propagator = parse_propagator(propagator);
        opts.grid = parse_grid(grid);
        if (timeout_s) opts.bab.timeout = std::chrono::duration<double>(*timeout_s);
        if (!(opts.confidence > 0.0 && opts.confidence < 1.0)) throw InvalidConfig("--confidence must lie in (0, 1)");
        opts.bab.validate();

        CommandResult res;
        if (check->parsed()) {
            res = cmd_check(opts);
        } else if (count->parsed()) {
            res = cmd_count(opts);
        } else if (count_discrete->parsed()) {
            res = cmd_count_discrete(opts);
        } else if (approx->parsed()) {
            res = cmd_approx(opts);
        } else {
            res = cmd_sample(opts);
        }

        const std::string text = res.report.to_json().dump(2);
        out << text << '\n';
        if (!output.empty()) {
            std::ofstream file(output);
            if (!file) throw Error("cannot write report to " + output);
            file << text << '\n';
        }
        summarize(err, res.report);
        return res.exit_code;
    } catch (const InvalidConfig& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_code::kUsage;
    } catch (const InputError& e) {
        err << "malformed input: " << e.what() << '\n';
        return exit_code::kMalformedInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_code::kInternal;
    }
}

}  // namespace reachcount
