#include "reachcount/bab.hpp"

#include <algorithm>
#include <barrier>
#include <exception>
#include <mutex>
#include <thread>

#include "reachcount/errors.hpp"

namespace reachcount {

Frontier Frontier::root(const Box& box) {
    Frontier f;
    f.boxes.push_back(box);
    f.volumes.push_back(1.0);
    f.enclosures.emplace_back();
    return f;
}

double Frontier::total_volume() const {
    double acc = 0.0;
    for (double v : volumes) acc += v;
    return acc;
}

Box BatchLayout::row(std::size_t i) const {
    std::vector<Interval> dims(k);
    for (std::size_t d = 0; d < k; ++d) {
        dims[d].lo = lo(i, d);
        dims[d].hi = hi(i, d);
    }
    return Box(std::move(dims));
}

std::vector<Box> BatchLayout::rows() const {
    std::vector<Box> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(row(i));
    return out;
}

void BabConfig::validate() const {
    if (chunk_size == 0) throw InvalidConfig("chunk_size must be at least 1");
    if (workers == 0) throw InvalidConfig("workers must be at least 1");
    if (timeout && timeout->count() <= 0) throw InvalidConfig("timeout must be positive");
}

BatchLayout to_batch(const Frontier& frontier) {
    BatchLayout layout;
    layout.n = frontier.size();
    layout.k = frontier.empty() ? 0 : frontier.boxes.front().size();
    layout.bounds.resize(layout.n * layout.k * 2);
    for (std::size_t i = 0; i < layout.n; ++i) {
        const auto& box = frontier.boxes[i];
        if (box.size() != layout.k) throw DimensionMismatch("frontier boxes differ in dimensionality");
        for (std::size_t d = 0; d < layout.k; ++d) {
            layout.bounds[(i * layout.k + d) * 2] = box[d].lo;
            layout.bounds[(i * layout.k + d) * 2 + 1] = box[d].hi;
        }
    }
    return layout;
}

FrontierEvaluation evaluate_frontier_full(const Network& net, const Frontier& frontier, const SafetyProperty& prop,
                                          const BabConfig& cfg) {
    cfg.validate();
    prop.check_dimensions(net.input_size(), net.output_size());
    for (const auto& box : frontier.boxes) {
        if (box.size() != net.input_size()) throw DimensionMismatch("frontier box does not match the network input");
    }

    const BatchLayout batch = to_batch(frontier);
    FrontierEvaluation result;
    result.verdicts.assign(batch.n, Verdict::Unknown);
    result.outputs.resize(batch.n);
    if (batch.n == 0) return result;

    auto eval_one = [&](std::size_t i) {
        const Box box = batch.row(i);
        std::span<const Interval> enclosure;
        if (i < frontier.enclosures.size()) enclosure = frontier.enclosures[i];
        ReachSet reach = propagate(net, box, cfg.propagator, enclosure);
        result.verdicts[i] = classify(reach, prop, box);
        result.outputs[i] = std::move(reach.outputs);
    };

    const std::size_t threads = std::min({cfg.workers, cfg.chunk_size, batch.n});
    if (threads <= 1) {
        for (std::size_t i = 0; i < batch.n; ++i) eval_one(i);
        return result;
    }

    // Chunks are processed one after another; inside a chunk every worker
    // takes a strided slice, then all meet at the barrier.
    std::barrier sync(static_cast<std::ptrdiff_t>(threads));
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&](std::size_t tid) {
        for (std::size_t start = 0; start < batch.n; start += cfg.chunk_size) {
            const std::size_t stop = std::min(batch.n, start + cfg.chunk_size);
            for (std::size_t i = start + tid; i < stop; i += threads) {
                try {
                    eval_one(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
            sync.arrive_and_wait();
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    }
    if (failure) std::rethrow_exception(failure);
    return result;
}

std::vector<Verdict> evaluate_frontier(const Network& net, const Frontier& frontier, const SafetyProperty& prop,
                                       const BabConfig& cfg) {
    return evaluate_frontier_full(net, frontier, prop, cfg).verdicts;
}

namespace {

// Widest dimension whose midpoint is strictly interior; nullopt when none is.
std::optional<std::size_t> split_dimension(const Box& box) {
    const std::size_t widest = widest_dim(box);
    if (splittable(box, widest)) return widest;
    std::optional<std::size_t> best;
    for (std::size_t d = 0; d < box.size(); ++d) {
        if (!splittable(box, d)) continue;
        if (!best || box[d].width() > box[*best].width()) best = d;
    }
    return best;
}

}  // namespace

RefineOutcome refine(const Frontier& frontier, std::span<const Verdict> verdicts, bool split_unknown,
                     std::span<const std::vector<Interval>> outputs) {
    if (verdicts.size() != frontier.size()) throw DimensionMismatch("refine: verdicts not aligned with frontier");
    if (!outputs.empty() && outputs.size() != frontier.size())
        throw DimensionMismatch("refine: outputs not aligned with frontier");
    RefineOutcome out;
    out.next.depth = frontier.depth + 1;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
        const double vol = frontier.volumes[i];
        switch (verdicts[i]) {
            case Verdict::Safe: out.safe_volume += vol; break;
            case Verdict::Violating: out.violating_volume += vol; break;
            case Verdict::Unknown: {
                if (!split_unknown) {
                    out.unknown_volume += vol;
                    break;
                }
                const auto dim = split_dimension(frontier.boxes[i]);
                if (!dim) {
                    out.residual_volume += vol;
                    out.residual.push_back(frontier.boxes[i]);
                    break;
                }
                auto [left, right] = bisect(frontier.boxes[i], *dim);
                out.next.boxes.push_back(std::move(left));
                out.next.boxes.push_back(std::move(right));
                out.next.volumes.push_back(vol * 0.5);
                out.next.volumes.push_back(vol * 0.5);
                const auto inherited = outputs.empty() ? std::vector<Interval>{} : outputs[i];
                out.next.enclosures.push_back(inherited);
                out.next.enclosures.push_back(inherited);
                break;
            }
        }
    }
    return out;
}

}  // namespace reachcount
