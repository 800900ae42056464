#include "reachcount/approx.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "reachcount/counting.hpp"
#include "reachcount/errors.hpp"

namespace reachcount {

using Clock = std::chrono::steady_clock;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

namespace {

// 53 random bits mapped to [0, 1).
double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void sample_in(const Box& box, std::mt19937_64& rng, std::vector<double>& x) {
    for (std::size_t d = 0; d < box.size(); ++d) {
        const auto& iv = box[d];
        x[d] = iv.degenerate() ? iv.lo : std::min(iv.lo + unit(rng) * iv.width(), iv.hi);
    }
}

}  // namespace

void SplitEstimateConfig::validate() const {
    if (samples_per_split == 0) throw InvalidConfig("samples_per_split must be at least 1");
    if (runs == 0) throw InvalidConfig("runs must be at least 1");
    if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidConfig("confidence must lie in (0, 1)");
    backend.validate();
}

SplitRun split_estimate_run_detailed(const Network& net, const SafetyProperty& prop, const SplitEstimateConfig& cfg,
                                     std::uint64_t run_seed) {
    cfg.validate();
    prop.check_dimensions(net.input_size(), net.output_size());
    const std::size_t k = net.input_size();
    std::mt19937_64 rng(run_seed);

    SplitRun run;
    Box region = prop.precondition;
    std::vector<double> x(k);
    std::vector<double> scratch;
    std::vector<double> violators;

    for (std::size_t s = 0; s < cfg.splits; ++s) {
        std::vector<std::size_t> candidates;
        for (std::size_t d = 0; d < k; ++d) {
            if (splittable(region, d)) candidates.push_back(d);
        }
        if (candidates.empty()) break;

        violators.clear();
        for (std::size_t m = 0; m < cfg.samples_per_split; ++m) {
            sample_in(region, rng, x);
            if (!prop.holds(net.forward(x, scratch))) violators.insert(violators.end(), x.begin(), x.end());
        }
        run.samples_used += cfg.samples_per_split;
        const std::size_t n_viol = violators.size() / k;

        // Most even split of the violating samples; ties go to the widest
        // dimension, then the lowest index.
        std::size_t best = candidates.front();
        std::uint64_t best_gap = UINT64_MAX;
        for (std::size_t d : candidates) {
            const double mid = region[d].midpoint();
            std::uint64_t left = 0;
            for (std::size_t v = 0; v < n_viol; ++v) left += violators[v * k + d] < mid ? 1 : 0;
            const std::uint64_t right = n_viol - left;
            const std::uint64_t gap = left > right ? left - right : right - left;
            if (gap < best_gap || (gap == best_gap && region[d].width() > region[best].width())) {
                best = d;
                best_gap = gap;
            }
        }

        auto [left, right] = bisect(region, best);
        region = (rng() & 1ULL) ? std::move(right) : std::move(left);
        ++run.splits_done;
    }

    const VrResult leaf = exact_count(net, prop.restricted_to(region), cfg.backend);
    const double leaf_share = leaf.vr_lb * volume_fraction(region, prop.precondition);
    run.estimate = std::clamp(std::ldexp(leaf_share, static_cast<int>(run.splits_done)), 0.0, 1.0);
    run.leaf = std::move(region);
    return run;
}

double split_estimate_run(const Network& net, const SafetyProperty& prop, const SplitEstimateConfig& cfg,
                          std::uint64_t run_seed) {
    return split_estimate_run_detailed(net, prop, cfg, run_seed).estimate;
}

EstimateResult split_estimate(const Network& net, const SafetyProperty& prop, const SplitEstimateConfig& cfg) {
    cfg.validate();
    const auto start = Clock::now();
    EstimateResult result;
    result.confidence = cfg.confidence;
    for (std::size_t r = 0; r < cfg.runs; ++r) {
        auto run = split_estimate_run_detailed(net, prop, cfg, stream_seed(cfg.seed, r));
        result.per_run_estimates.push_back(run.estimate);
        result.samples_used += run.samples_used;
    }
    auto sorted = result.per_run_estimates;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    result.point_estimate = n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    result.lower_bound = sorted.front();
    result.wall_time = Clock::now() - start;
    return result;
}

EstimateResult mc_estimate(const Network& net, const SafetyProperty& prop, std::uint64_t n_samples,
                           double confidence, std::uint64_t seed) {
    if (n_samples == 0) throw InvalidConfig("n_samples must be at least 1");
    if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidConfig("confidence must lie in (0, 1)");
    prop.check_dimensions(net.input_size(), net.output_size());
    const auto start = Clock::now();

    std::mt19937_64 rng(stream_seed(seed, 0));
    std::vector<double> x(net.input_size());
    std::vector<double> scratch;
    std::uint64_t violating = 0;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        sample_in(prop.precondition, rng, x);
        if (!prop.holds(net.forward(x, scratch))) ++violating;
    }

    EstimateResult result;
    const double n = static_cast<double>(n_samples);
    result.point_estimate = static_cast<double>(violating) / n;
    result.lower_bound = std::max(0.0, result.point_estimate - std::sqrt(std::log(1.0 / (1.0 - confidence)) / (2.0 * n)));
    result.confidence = confidence;
    result.per_run_estimates = {result.point_estimate};
    result.samples_used = n_samples;
    result.violating_samples = violating;
    result.wall_time = Clock::now() - start;
    return result;
}

std::pair<Network, SafetyProperty> build_tiny_vr_net(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 0.1)) throw InvalidEpsilon("epsilon must lie in (0, 0.1)");
    constexpr std::size_t kHidden = 32;

    // Filler units get arbitrary incoming weights and zero outgoing weights.
    std::uint64_t state = 0x7a11ULL;
    auto filler = [&state] {
        state = splitmix64(state);
        return static_cast<double>(state >> 11) * 0x1.0p-52 - 1.0;
    };

    AffineLayer first;
    first.rows = kHidden;
    first.cols = 3;
    first.activation = Activation::Relu;
    first.weights.assign(kHidden * 3, 0.0);
    first.biases.assign(kHidden, 0.0);
    // relu(x0 - x1), relu(x1 + 1 - eps), relu(x2 + 1 - eps); the last two never clip on [0,1].
    first.weights[0 * 3 + 0] = 1.0;
    first.weights[0 * 3 + 1] = -1.0;
    first.weights[1 * 3 + 1] = 1.0;
    first.biases[1] = 1.0 - epsilon;
    first.weights[2 * 3 + 2] = 1.0;
    first.biases[2] = 1.0 - epsilon;
    for (std::size_t i = 3; i < kHidden; ++i) {
        for (std::size_t j = 0; j < 3; ++j) first.weights[i * 3 + j] = filler();
        first.biases[i] = filler();
    }

    AffineLayer second;
    second.rows = kHidden;
    second.cols = kHidden;
    second.activation = Activation::Relu;
    second.weights.assign(kHidden * kHidden, 0.0);
    second.biases.assign(kHidden, 0.0);
    // relu(max(x0,x1) - x2) and the pass-through x2 + 1 - eps.
    second.weights[0 * kHidden + 0] = 1.0;
    second.weights[0 * kHidden + 1] = 1.0;
    second.weights[0 * kHidden + 2] = -1.0;
    second.weights[1 * kHidden + 2] = 1.0;
    for (std::size_t i = 2; i < kHidden; ++i) {
        for (std::size_t j = 0; j < kHidden; ++j) second.weights[i * kHidden + j] = filler();
        second.biases[i] = filler();
    }

    AffineLayer out;
    out.rows = 1;
    out.cols = kHidden;
    out.activation = Activation::Identity;
    out.weights.assign(kHidden, 0.0);
    out.weights[0] = 1.0;
    out.weights[1] = 1.0;
    out.biases = {-1.0};

    Network net(3, {std::move(first), std::move(second), std::move(out)});

    SafetyProperty prop;
    prop.precondition = Box{{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
    prop.clauses = {{Atom{{1.0}, 0.0, Comparison::Ge}}};
    return {std::move(net), std::move(prop)};
}

}  // namespace reachcount
