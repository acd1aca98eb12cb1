#include <doctest.h>

#include <cmath>
#include <random>

#include "hdisk/errors.hpp"
#include "hdisk/geometric_measure.hpp"

using namespace hdisk;

namespace {

BoundarySet random_arcs(std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Arc> arcs;
    for (int i = 0; i < count; ++i) arcs.emplace_back(-pi + two_pi * u(rng), 0.01 + 0.6 * u(rng) * u(rng));
    return BoundarySet::arcs(arcs);
}

}  // namespace

TEST_SUITE("geometric_measure") {
    TEST_CASE("gauge functions and the admissibility probe") {
        const auto p1 = GaugeFunction::power(1.0);
        CHECK(p1(0.3) == doctest::Approx(0.3));
        CHECK(p1.admissible() == Admissibility::yes);
        CHECK(GaugeFunction::power(2.0).admissible() == Admissibility::yes);
        CHECK(GaugeFunction::power(0.5).admissible() == Admissibility::no);
        CHECK(GaugeFunction::tlog().admissible() == Admissibility::no);
        const auto tl = GaugeFunction::tlog();
        CHECK(tl(0.1) == doctest::Approx(0.1 * std::log(10.0)));
        CHECK(tl(2.0) == doctest::Approx(std::exp(-1.0)));
        const auto c = GaugeFunction::custom({{0.1, 0.2}, {0.5, 0.4}});
        CHECK(c(0.05) == doctest::Approx(0.1));
        CHECK(c(0.3) == doctest::Approx(0.3));
        CHECK(c(9.0) == doctest::Approx(0.4));
        CHECK_THROWS_AS(GaugeFunction::custom({{0.1, 0.5}, {0.2, 0.4}}), InvalidArgument);
        CHECK_THROWS_AS(GaugeFunction::power(0.0), InvalidArgument);
    }

    TEST_CASE("boundary set normalization") {
        const auto e = BoundarySet::arcs({Arc(0.0, 0.5), Arc(0.4, 0.3), Arc(3.0, 0.5)});
        // the first two overlap; the third wraps across pi
        REQUIRE(e.segments().size() == 2);
        CHECK(e.total_length() == doctest::Approx(1.2));
        CHECK(e.contains(-3.1));
        CHECK_FALSE(e.contains(1.0));
        CHECK(BoundarySet::full_circle().total_length() == doctest::Approx(two_pi));
        const auto k = BoundarySet::cantor(Arc(-0.5, 1.0), 1.0 / 3.0, 5);
        CHECK(k.segments().size() == 32);
        CHECK(k.total_length() == doctest::Approx(std::pow(2.0 / 3.0, 5)));
        CHECK_THROWS_AS(BoundarySet::cantor(Arc(0.0, 1.0), 0.5, 3), InvalidArgument);
        CHECK_THROWS_AS(BoundarySet::cantor(Arc(0.0, 1.0), 0.3, 21), InvalidArgument);
    }

    TEST_CASE("content examples") {
        const auto h1 = GaugeFunction::power(1.0);
        CHECK(hausdorff_content(BoundarySet::points({}), h1) == 0.0);
        CHECK(hausdorff_content(BoundarySet::arcs({Arc(1.0, 0.7)}), h1) == doctest::Approx(0.7));
        const auto two = BoundarySet::arcs({Arc(0.0, 0.2), Arc(0.21, 0.2)});
        const auto sq = GaugeFunction::power(0.5);
        for (auto mode : {ContentMode::exact_dp, ContentMode::brute_force, ContentMode::greedy})
            CHECK(std::abs(hausdorff_content(two, sq, mode) - std::sqrt(0.41)) <= 1e-12);
        CHECK(hausdorff_content(BoundarySet::points({BoundaryPoint(0.3)}), sq) == 0.0);
    }

    TEST_CASE("exact DP agrees with brute force and bounds greedy") {
        std::mt19937_64 rng(11);
        const GaugeFunction gauges[] = {GaugeFunction::power(0.5), GaugeFunction::power(1.0), GaugeFunction::tlog()};
        for (int trial = 0; trial < 60; ++trial) {
            const auto e = random_arcs(rng, 1 + trial % 8);
            for (const auto& h : gauges) {
                const double dp = hausdorff_content(e, h, ContentMode::exact_dp);
                CHECK(dp == hausdorff_content(e, h, ContentMode::brute_force));
                CHECK(hausdorff_content(e, h, ContentMode::greedy) >= dp - 1e-15);
            }
        }
    }

    TEST_CASE("cover costs are consistent") {
        std::mt19937_64 rng(5);
        const auto e = random_arcs(rng, 7);
        const auto h = GaugeFunction::power(0.5);
        const auto r = hausdorff_content_cover(e, h);
        CHECK(cover_cost(e.segments(), r.cover, h) == r.value);
        std::size_t covered = 0;
        for (const auto& run : r.cover) covered += run.count;
        CHECK(covered == e.segments().size());
    }

    TEST_CASE("size limits") {
        std::vector<Arc> arcs;
        for (int i = 0; i < 12; ++i) arcs.emplace_back(-pi + 0.5 * i, 0.1);
        CHECK_THROWS_AS(hausdorff_content(BoundarySet::arcs(arcs), GaugeFunction::power(1.0), ContentMode::brute_force),
                        SizeLimitError);
    }

    TEST_CASE("certificates") {
        const auto full = certify_theorem1_set(BoundarySet::full_circle(), GaugeFunction::power(1.0));
        CHECK(full.pass);
        CHECK(full.hypotheses_met);
        CHECK(full.admissible == Admissibility::yes);
        CHECK(full.content == doctest::Approx(two_pi));
        const auto point = certify_theorem1_set(BoundarySet::points({BoundaryPoint(1.0)}), GaugeFunction::power(1.0));
        CHECK_FALSE(point.pass);
        CHECK(point.content == 0.0);
    }

    TEST_CASE("Cantor content is stable under refinement") {
        const auto h = GaugeFunction::power(std::log(2.0) / std::log(3.0));
        double prev = 0.0;
        for (int depth : {8, 10, 12}) {
            const double c = hausdorff_content(BoundarySet::cantor(Arc(-0.5, 1.0), 1.0 / 3.0, depth), h);
            CHECK(c > 0.5);
            if (prev > 0.0) CHECK(std::abs(c - prev) <= 1e-9 * prev);
            prev = c;
        }
    }

    TEST_CASE("capacity") {
        for (double alpha : {0.3, 0.5, 0.8}) {
            const auto r = alpha_capacity(BoundarySet::full_circle(), alpha, 512);
            const double oracle = std::pow(pi, -alpha) / (1.0 - alpha);
            CHECK(r.energy == doctest::Approx(oracle).epsilon(1e-3));
            CHECK(r.capacity == doctest::Approx(1.0 / r.energy));
        }
        const double big = alpha_capacity(BoundarySet::arcs({Arc(0.0, 1.0)}), 0.5, 512).capacity;
        const double small = alpha_capacity(BoundarySet::arcs({Arc(0.3, 0.4)}), 0.5, 512).capacity;
        CHECK(small <= big + 1e-6);
        const double tiny = alpha_capacity(BoundarySet::arcs({Arc(0.3, 1e-4)}), 0.5, 512).capacity;
        CHECK(tiny < 0.2 * small);
        const auto chord = alpha_capacity(BoundarySet::full_circle(), 0.5, 512, KernelMode::chordal);
        CHECK(chord.capacity > 0.0);
        CHECK_THROWS_AS(alpha_capacity(BoundarySet::full_circle(), 1.0, 512), InvalidArgument);
    }

    TEST_CASE("cell-averaged kernel approaches the point kernel for distant cells") {
        const double w = 1e-3;
        CHECK(cell_averaged_kernel(1.0, w, 0.5, KernelMode::angular) == doctest::Approx(1.0).epsilon(1e-6));
        const double chord = std::pow(2.0 * std::sin(0.5), -0.5);
        CHECK(cell_averaged_kernel(1.0, w, 0.5, KernelMode::chordal) == doctest::Approx(chord).epsilon(1e-6));
        // self-cell: mean of |u|^-a over a hat of width w is 2 w^-a / ((1 - a)(2 - a))
        CHECK(cell_averaged_kernel(0.0, w, 0.5, KernelMode::angular) ==
              doctest::Approx(2.0 * std::pow(w, -0.5) / (0.5 * 1.5)).epsilon(1e-12));
    }
}
