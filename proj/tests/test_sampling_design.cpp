#include <doctest.h>

#include <cmath>

#include "hdisk/errors.hpp"
#include "hdisk/sampling_design.hpp"

using namespace hdisk;

TEST_SUITE("sampling_design") {
    TEST_CASE("dyadic plan on the full circle") {
        const auto plan = generate_dyadic(BoundarySet::full_circle(), 3, 1);
        std::size_t expected = 0;
        for (int m = 1; m <= 3; ++m) expected += static_cast<std::size_t>(std::ceil(two_pi * std::ldexp(1.0, m)));
        CHECK(plan.size() == expected);
        CHECK(plan.tail_condition());
        const auto cov = validate_coverage(plan, 4096);
        CHECK(cov.uncovered_fraction == 0.0);
        for (const auto& z : plan.points) {
            const double d = z.depth();
            CHECK(std::abs(std::log2(d) - std::round(std::log2(d))) < 1e-9);
        }
    }

    TEST_CASE("dyadic plan on an arc stays near the arc") {
        const auto e = BoundarySet::arcs({Arc(0.2, 0.1)});
        const auto plan = generate_dyadic(e, 10, 1);
        for (const auto& z : plan.points) {
            const double step = z.depth();  // 2^-m at level m
            CHECK(e.distance(std::arg(z.value())) <= step + 1e-12);
        }
        const auto cov = validate_coverage(plan, 4096);
        CHECK(cov.uncovered_fraction == 0.0);
        // away from E only the shallow levels reach, and they stay below the threshold
        CHECK(cov.uncovered_fraction_outside >= 0.85);
        for (std::size_t j = 0; j < cov.angles.size(); ++j)
            if (e.distance(cov.angles[j]) > 1.7) CHECK(cov.counts[j] == 0);
    }

    TEST_CASE("one level has no boundary accumulation") {
        const auto plan = generate_dyadic(BoundarySet::full_circle(), 1, 1);
        for (const auto& z : plan.points) CHECK(z.modulus() == doctest::Approx(0.5));
        CHECK_FALSE(plan.tail_condition());
    }

    TEST_CASE("plan generation limits") {
        CHECK_THROWS_AS(generate_dyadic(BoundarySet::full_circle(), 0, 1), InvalidArgument);
        CHECK_THROWS_AS(generate_dyadic(BoundarySet::full_circle(), 24, 4), SizeLimitError);
        CHECK_THROWS_AS(generate_radial_ray(BoundarySet::full_circle(), {0.0}, {1.0}), InvalidArgument);
    }

    TEST_CASE("prefixes of a level are spread out") {
        const auto plan = generate_dyadic(BoundarySet::full_circle(), 6, 1);
        // the first quarter of level 6 already meets every quadrant
        std::size_t start = 0;
        for (int m = 1; m < 6; ++m) start += static_cast<std::size_t>(std::ceil(two_pi * std::ldexp(1.0, m)));
        bool quadrant[4] = {false, false, false, false};
        for (std::size_t i = start; i < start + 100; ++i)
            quadrant[static_cast<int>((std::arg(plan.points[i].value()) + pi) / (pi / 2)) % 4] = true;
        CHECK((quadrant[0] && quadrant[1] && quadrant[2] && quadrant[3]));
    }

    TEST_CASE("coverage validator") {
        const auto full = generate_dyadic(BoundarySet::full_circle(), 8, 1);
        const auto cov = validate_coverage(full, 4096);
        CHECK(cov.uncovered_fraction == 0.0);
        CHECK(cov.min_count >= 4);
        CHECK(validate_coverage(full, 4096, false).counts == cov.counts);

        SamplingPlan single;
        single.points = {DiskPoint(0.9, 0.0)};
        const auto one = validate_coverage(single, 1024);
        for (std::size_t j = 0; j < one.angles.size(); ++j)
            CHECK((one.counts[j] == 1) == stolz_contains(BoundaryPoint(one.angles[j]), single.points[0]));

        const auto empty = validate_coverage(SamplingPlan{}, 64);
        CHECK(empty.uncovered_fraction == 1.0);
        CHECK_THROWS_AS(validate_coverage(full, 32), InvalidArgument);
    }

    TEST_CASE("Blaschke sums") {
        const auto full = generate_dyadic(BoundarySet::full_circle(), 8, 1);
        const auto r = blaschke_sum(full);
        REQUIRE(r.level_sums.size() == 8);
        for (double s : r.level_sums) CHECK(std::abs(s - two_pi) <= 0.1 * two_pi);
        CHECK(r.verdict == TrendVerdict::divergent);

        std::vector<double> radii;
        for (int n = 1; n <= 30; ++n) radii.push_back(1.0 - std::ldexp(1.0, -n));
        const auto ray = generate_radial_ray(BoundarySet::full_circle(), {0.0}, radii);
        const auto rr = blaschke_sum(ray);
        CHECK(rr.total == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(rr.verdict == TrendVerdict::convergent);

        const auto e = blaschke_sum(SamplingPlan{});
        CHECK(e.total == 0.0);
        CHECK(e.verdict == TrendVerdict::inconclusive);
    }

    TEST_CASE("separation sums") {
        const auto plan = generate_dyadic(BoundarySet::full_circle(), 8, 1);
        const auto f = AnalyticModel::taylor({0.3, 0.0, 1.0});
        const auto same = separation_sum(f, f, plan, plan.size());
        CHECK(same.identically_zero);
        CHECK(same.partial_sums.back() == 0.0);

        const auto shifted = AnalyticModel::taylor({0.3 + 0.5, 0.0, 1.0});
        const auto c = separation_sum(f, shifted, plan, 500);
        for (std::size_t n = 0; n < 500; ++n) CHECK(c.partial_sums[n] == doctest::Approx(0.25 * (n + 1)));
        CHECK(c.slope == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(c.verdict == TrendVerdict::divergent);

        const auto z = separation_sum(AnalyticModel::taylor({0.0, 1.0}), AnalyticModel::taylor({0.0}), plan, plan.size());
        CHECK(z.verdict == TrendVerdict::divergent);
        CHECK(z.slope > 0.9);
        CHECK_THROWS_AS(separation_sum(f, f, plan, plan.size() + 1), InvalidArgument);
    }
}
