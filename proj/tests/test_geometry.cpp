#include <doctest.h>

#include <cmath>
#include <random>

#include "reachcount/errors.hpp"
#include "reachcount/geometry.hpp"
#include "support/corpus.hpp"

using namespace reachcount;
using namespace reachcount::testing;

TEST_CASE("interval validation") {
    CHECK_THROWS_AS(Interval(1.0, 0.0), InvalidBounds);
    CHECK_THROWS_AS(Interval(0.0, INFINITY), InvalidBounds);
    CHECK_THROWS_AS(Interval(std::nan(""), 0.0), InvalidBounds);
    CHECK(Interval(2.0, 2.0).degenerate());
    CHECK_FALSE(intersect(Interval(0, 1), Interval(2, 3)).has_value());
    CHECK(*intersect(Interval(0, 2), Interval(1, 3)) == Interval(1, 2));
    CHECK(hull(Interval(0, 1), Interval(2, 3)) == Interval(0, 3));
    CHECK_THROWS(Box(std::vector<Interval>{}));
}

TEST_CASE("bisect examples") {
    auto [l, r] = bisect(Box{{0, 1}, {0, 2}}, 1);
    CHECK(l == Box{{0, 1}, {0, 1}});
    CHECK(r == Box{{0, 1}, {1, 2}});

    auto [a, b] = bisect(Box{{0, 1}}, 0);
    CHECK(a == Box{{0, 0.5}});
    CHECK(b == Box{{0.5, 1}});

    auto [c, d] = bisect(Box{{0.01, 0.05}}, 0);
    CHECK(c[0].hi == 0.03);
    CHECK(d[0].lo == 0.03);
    CHECK(c[0].lo == 0.01);
    CHECK(d[0].hi == 0.05);
}

TEST_CASE("bisect errors") {
    CHECK_THROWS_AS(bisect(Box{{1, 1}, {0, 1}}, 0), DegenerateDimension);
    CHECK_THROWS_AS(bisect(Box{{0, 1}}, 1), DimensionMismatch);
    const double x = 1.0;
    CHECK_FALSE(splittable(Box{{x, std::nextafter(x, 2.0)}}, 0));
    CHECK(splittable(Box{{0, 1}}, 0));
}

TEST_CASE("widest_dim examples") {
    CHECK(widest_dim(Box{{0, 1}, {0, 2}}) == 1);
    CHECK(widest_dim(Box{{0, 1}, {0, 1}}) == 0);
    CHECK(widest_dim(Box{{0, 0}, {3, 4}}) == 1);
}

TEST_CASE("volume_fraction examples") {
    Box parent{{0, 1}, {0, 2}};
    auto [l, r] = bisect(parent, 1);
    CHECK(volume_fraction(l, parent) == 0.5);
    CHECK(volume_fraction(parent, parent) == 1.0);

    Box p5{{0, 1}, {-1, 1}, {2, 3}, {0, 0.5}, {10, 20}};
    Box sub = p5;
    for (int s = 0; s < 12; ++s) sub = bisect(sub, widest_dim(sub)).first;
    CHECK(volume_fraction(sub, p5) == std::ldexp(1.0, -12));

    CHECK_THROWS_AS(volume_fraction(Box{{0, 2}}, Box{{0, 1}}), NotContained);
    CHECK_THROWS_AS(volume_fraction(Box{{0, 1}}, Box{{0, 1}, {0, 1}}), DimensionMismatch);
}

TEST_CASE("volume_fraction skips zero-width parent dimensions") {
    Box parent{{0, 1}, {0.3, 0.3}};
    Box sub{{0, 0.25}, {0.3, 0.3}};
    CHECK(volume_fraction(sub, parent) == 0.25);
}

TEST_CASE("interval_dot examples") {
    std::vector<double> c{2.0, -3.0};
    CHECK(interval_dot(c, Box{{0, 1}, {0, 1}}, 1.0) == Interval(-2, 3));
    std::vector<double> z{0.0, 0.0};
    CHECK(interval_dot(z, Box{{-4, 1}, {0, 9}}, 5.0) == Interval(5, 5));
    CHECK_THROWS_AS(interval_dot(c, Box{{0, 1}}, 0.0), DimensionMismatch);
}

TEST_CASE("interval_dot matches 9-dim vertex enumeration") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g(0, 1);
    for (int trial = 0; trial < 50; ++trial) {
        Box box = random_box(rng, 9, -3, 3);
        std::vector<double> c(9);
        for (auto& v : c) v = g(rng);
        const double bias = g(rng);
        auto got = interval_dot(c, box, bias);
        auto ref = vertex_range(c, box, bias);
        CHECK(got.lo == doctest::Approx(ref.lo).epsilon(1e-12));
        CHECK(got.hi == doctest::Approx(ref.hi).epsilon(1e-12));
    }
}

TEST_CASE("bisection children tile the parent") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Box box = random_box(rng, 4, -10, 10);
        const std::size_t d = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
        auto [l, r] = bisect(box, d);
        CHECK(l[d].lo == box[d].lo);
        CHECK(r[d].hi == box[d].hi);
        CHECK(l[d].hi == r[d].lo);
        CHECK(box.contains(l));
        CHECK(box.contains(r));
        const double sum = volume_fraction(l, box) + volume_fraction(r, box);
        CHECK(std::abs(sum - 1.0) <= std::numeric_limits<double>::epsilon());
    }
}

TEST_CASE("interval_dot is inclusion-monotone and sound") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0, 1);
    for (int trial = 0; trial < 20; ++trial) {
        Box box = random_box(rng, 5);
        std::vector<double> c(5);
        for (auto& v : c) v = g(rng);
        const double bias = g(rng);
        auto parent = interval_dot(c, box, bias);
        Box sub = bisect(box, widest_dim(box)).second;
        sub = bisect(sub, 2).first;
        auto child = interval_dot(c, sub, bias);
        CHECK(parent.contains(child));
        for (int s = 0; s < 10000 / 20; ++s) {
            auto x = sample_point(rng, box);
            double v = bias;
            for (std::size_t d = 0; d < 5; ++d) v += c[d] * x[d];
            CHECK(parent.contains(v));
        }
    }
}

TEST_CASE("interval_dot soundness over 1e4 samples") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g(0, 1);
    Box box = random_box(rng, 6);
    std::vector<double> c(6);
    for (auto& v : c) v = g(rng);
    auto iv = interval_dot(c, box, 0.25);
    int outside = 0;
    for (int s = 0; s < 10000; ++s) {
        auto x = sample_point(rng, box);
        double v = 0.25;
        for (std::size_t d = 0; d < 6; ++d) v += c[d] * x[d];
        if (!iv.contains(v)) ++outside;
    }
    CHECK(outside == 0);
}
