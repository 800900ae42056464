#include "reachcount/counting.hpp"

#include <algorithm>
#include <thread>

#include "reachcount/errors.hpp"

namespace reachcount {

using Clock = std::chrono::steady_clock;

GridSpec::GridSpec(std::vector<std::uint64_t> points_per_dim) : points_(std::move(points_per_dim)) {
    if (points_.empty()) throw InvalidConfig("grid needs at least one dimension");
    std::uint64_t total = 1;
    for (auto p : points_) {
        if (p == 0) throw InvalidConfig("grid point counts must be at least 1");
        if (__builtin_mul_overflow(total, p, &total))
            throw InvalidConfig("grid point count overflows a 64-bit counter");
    }
}

GridSpec GridSpec::uniform(std::size_t dims, std::uint64_t points) {
    return GridSpec(std::vector<std::uint64_t>(dims, points));
}

std::uint64_t GridSpec::points_on(const Box& box, std::size_t dim) const {
    return box[dim].degenerate() ? 1 : points_[dim];
}

std::uint64_t GridSpec::total_points(const Box& box) const {
    if (box.size() != points_.size()) throw DimensionMismatch("grid and box dimensionality differ");
    std::uint64_t total = 1;
    for (std::size_t d = 0; d < box.size(); ++d) total *= points_on(box, d);
    return total;
}

double GridSpec::coordinate(const Box& box, std::size_t dim, std::uint64_t i) const {
    const auto n = points_on(box, dim);
    const auto& iv = box[dim];
    if (n == 1 || i == 0) return iv.lo;
    if (i + 1 == n) return iv.hi;
    return iv.lo + static_cast<double>(i) * (iv.width() / static_cast<double>(n - 1));
}

namespace {

double elapsed(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_inputs(const Network& net, const SafetyProperty& prop, const BabConfig& cfg) {
    cfg.validate();
    prop.check_dimensions(net.input_size(), net.output_size());
}

}  // namespace

VrResult exact_count(const Network& net, const SafetyProperty& prop, const BabConfig& cfg) {
    check_inputs(net, prop, cfg);
    const auto start = Clock::now();

    VrResult result;
    double violating = 0.0;
    double unresolved = 0.0;
    Frontier frontier = Frontier::root(prop.precondition);

    while (!frontier.empty()) {
        if (cfg.timeout && elapsed(start) > cfg.timeout->count()) {
            unresolved += frontier.total_volume();
            result.timed_out = true;
            break;
        }
        const auto eval = evaluate_frontier_full(net, frontier, prop, cfg);
        result.nodes_explored += frontier.size();
        result.max_depth_reached = frontier.depth;

        auto step = refine(frontier, eval.verdicts, frontier.depth < cfg.max_depth, eval.outputs);
        violating += step.violating_volume;
        unresolved += step.unknown_volume;
        result.residual_volume += step.residual_volume;
        frontier = std::move(step.next);
    }

    result.vr_lb = std::min(violating, 1.0);
    result.vr_ub = std::min(violating + unresolved + result.residual_volume, 1.0);
    result.exact = unresolved == 0.0 && result.residual_volume == 0.0 && !result.timed_out;
    result.wall_time = Clock::now() - start;
    return result;
}

namespace {

// Inclusive lattice index range per dimension.
struct Cell {
    std::vector<std::uint64_t> first;
    std::vector<std::uint64_t> last;

    std::uint64_t count() const {
        std::uint64_t n = 1;
        for (std::size_t d = 0; d < first.size(); ++d) n *= last[d] - first[d] + 1;
        return n;
    }
};

Box cell_box(const Cell& cell, const Box& domain, const GridSpec& grid) {
    std::vector<Interval> dims(domain.size());
    for (std::size_t d = 0; d < domain.size(); ++d) {
        dims[d].lo = grid.coordinate(domain, d, cell.first[d]);
        dims[d].hi = grid.coordinate(domain, d, cell.last[d]);
    }
    return Box(std::move(dims));
}

// Direct evaluation of every lattice point inside the cell.
std::uint64_t count_violations(const Network& net, const SafetyProperty& prop, const Cell& cell, const Box& domain,
                               const GridSpec& grid) {
    const std::size_t k = domain.size();
    std::vector<std::uint64_t> idx = cell.first;
    std::vector<double> x(k);
    std::vector<double> scratch;
    std::uint64_t violating = 0;
    while (true) {
        for (std::size_t d = 0; d < k; ++d) x[d] = grid.coordinate(domain, d, idx[d]);
        if (!prop.holds(net.forward(x, scratch))) ++violating;
        std::size_t d = 0;
        while (d < k && idx[d] == cell.last[d]) {
            idx[d] = cell.first[d];
            ++d;
        }
        if (d == k) break;
        ++idx[d];
    }
    return violating;
}

}  // namespace

VrResult exact_count_discrete(const Network& net, const SafetyProperty& prop, const GridSpec& grid,
                              const BabConfig& cfg) {
    check_inputs(net, prop, cfg);
    const Box& domain = prop.precondition;
    if (grid.dims() != domain.size()) throw DimensionMismatch("grid dimensionality differs from the precondition");
    const auto start = Clock::now();
    const std::size_t k = domain.size();

    VrResult result;
    const std::uint64_t total = grid.total_points(domain);
    std::uint64_t violating = 0;

    Cell root;
    root.first.assign(k, 0);
    for (std::size_t d = 0; d < k; ++d) root.last.push_back(grid.points_on(domain, d) - 1);
    std::vector<Cell> cells{root};
    std::size_t depth = 0;

    while (!cells.empty()) {
        Frontier frontier;
        frontier.depth = depth;
        frontier.boxes.reserve(cells.size());
        for (const auto& c : cells) frontier.boxes.push_back(cell_box(c, domain, grid));
        frontier.volumes.assign(cells.size(), 0.0);

        const auto verdicts = evaluate_frontier(net, frontier, prop, cfg);
        result.nodes_explored += cells.size();
        result.max_depth_reached = depth;

        std::vector<Cell> next;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto& cell = cells[i];
            if (verdicts[i] == Verdict::Safe) continue;
            if (verdicts[i] == Verdict::Violating) {
                violating += cell.count();
                continue;
            }
            bool small = true;
            for (std::size_t d = 0; d < k; ++d) small = small && cell.last[d] - cell.first[d] <= 1;
            if (small) {
                violating += count_violations(net, prop, cell, domain, grid);
                continue;
            }
            const auto& box = frontier.boxes[i];
            const std::size_t dim = widest_dim(box);
            const std::uint64_t mid = cell.first[dim] + (cell.last[dim] - cell.first[dim]) / 2;
            Cell left = cell;
            Cell right = cell;
            left.last[dim] = mid;
            right.first[dim] = mid + 1;
            next.push_back(std::move(left));
            next.push_back(std::move(right));
        }
        cells = std::move(next);
        ++depth;
    }

    result.violating_points = violating;
    result.total_points = total;
    result.vr_lb = result.vr_ub = static_cast<double>(violating) / static_cast<double>(total);
    result.exact = true;
    result.wall_time = Clock::now() - start;
    return result;
}

PointCount brute_force_count(const Network& net, const SafetyProperty& prop, const GridSpec& grid,
                             std::size_t workers) {
    prop.check_dimensions(net.input_size(), net.output_size());
    const Box& domain = prop.precondition;
    if (grid.dims() != domain.size()) throw DimensionMismatch("grid dimensionality differs from the precondition");
    const std::uint64_t total = grid.total_points(domain);
    if (total > kBruteForceLimit) {
        throw GridTooLarge("brute force limited to " + std::to_string(kBruteForceLimit) + " points, grid has " +
                           std::to_string(total));
    }
    const std::size_t k = domain.size();
    std::vector<std::uint64_t> radix(k);
    for (std::size_t d = 0; d < k; ++d) radix[d] = grid.points_on(domain, d);

    auto count_range = [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<double> x(k);
        std::vector<double> scratch;
        std::uint64_t violating = 0;
        for (std::uint64_t flat = begin; flat < end; ++flat) {
            std::uint64_t rest = flat;
            for (std::size_t d = 0; d < k; ++d) {
                x[d] = grid.coordinate(domain, d, rest % radix[d]);
                rest /= radix[d];
            }
            if (!prop.holds(net.forward(x, scratch))) ++violating;
        }
        return violating;
    };

    workers = std::max<std::size_t>(1, std::min<std::uint64_t>(workers, total));
    std::vector<std::uint64_t> partial(workers, 0);
    if (workers == 1) {
        partial[0] = count_range(0, total);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                partial[w] = count_range(total * w / workers, total * (w + 1) / workers);
            });
        }
    }
    PointCount out;
    out.total = total;
    for (auto p : partial) out.violating += p;
    return out;
}

double brute_force_vr(const Network& net, const SafetyProperty& prop, const GridSpec& grid, std::size_t workers) {
    return brute_force_count(net, prop, grid, workers).rate();
}

}  // namespace reachcount
