#include <doctest.h>

#include <cmath>

#include "hdisk/errors.hpp"
#include "hdisk/measure_equivalence.hpp"

using namespace hdisk;

namespace {

NoiseModel three_by_three() {
    // symmetric weights keep the mean at zero
    return NoiseModel(GridDensity{0.2, 3, {0.05, 0.1, 0.05, 0.1, 0.4, 0.1, 0.05, 0.1, 0.05}});
}

}  // namespace

TEST_SUITE("measure_equivalence") {
    TEST_CASE("noise validation names the field") {
        try {
            NoiseModel::gaussian(-0.1);
            FAIL("expected a throw");
        } catch (const InvalidArgument& e) {
            CHECK(e.field() == "noise.sigma");
        }
        CHECK_THROWS_AS(NoiseModel::uniform_disk(0.0), InvalidArgument);
        CHECK_THROWS_AS(NoiseModel(GridDensity{0.1, 2, {0.25, 0.25, 0.25}}), InvalidArgument);
        CHECK_THROWS_AS(NoiseModel(GridDensity{0.1, 2, {0.25, 0.25, 0.25, 0.2}}), InvalidArgument);
        CHECK_THROWS_AS(NoiseModel(GridDensity{0.1, 2, {0.5, 0.5, 0.0, 0.0}}), InvalidArgument);  // mean off zero
    }

    TEST_CASE("densities integrate to one") {
        for (const auto& p : {NoiseModel::gaussian(0.7), three_by_three()})
            CHECK(std::abs(hellinger_affinity_quadrature(p, {0.0, 0.0}, 1e-11) - 1.0) <= 1e-8);
        // zero mean of the grid density, by the same split quadrature
        CHECK(std::abs(hellinger_affinity_quadrature(three_by_three(), {0.0, 0.0}) - 1.0) <= 1e-8);
        const auto u = NoiseModel::uniform_disk(0.3);
        CHECK(std::abs(hellinger_affinity_quadrature(u, {0.0, 0.0}) - 1.0) <= 1e-8);
        CHECK(hellinger_affinity_quadrature(u, {0.2, 0.1}) == doctest::Approx(hellinger_affinity(u, {0.2, 0.1})).epsilon(1e-8));
    }

    TEST_CASE("zero shift has affinity one") {
        for (const auto& p : {NoiseModel::gaussian(0.7), NoiseModel::uniform_disk(0.3), three_by_three(), NoiseModel::none()})
            CHECK(hellinger_affinity(p, {0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(hellinger_affinity(NoiseModel::none(), {1e-3, 0.0}) == 0.0);
    }

    TEST_CASE("Gaussian closed form") {
        const auto p = NoiseModel::gaussian(1.0);
        CHECK(hellinger_affinity(p, {2.0, 0.0}) == doctest::Approx(std::exp(-0.5)));
        CHECK(std::abs(hellinger_affinity_quadrature(p, {2.0, 0.0}) - std::exp(-0.5)) <= 1e-8);
        CHECK(log_hellinger_affinity(p, {0.0, 3.0}) == doctest::Approx(-9.0 / 8.0));
    }

    TEST_CASE("uniform disk lens") {
        const double r = 0.5;
        const auto p = NoiseModel::uniform_disk(r);
        for (double s : {0.1, 0.4, 0.77, 0.99}) {
            const double lens = 2 * r * r * std::acos(s / (2 * r)) - 0.5 * s * std::sqrt(4 * r * r - s * s);
            CHECK(hellinger_affinity(p, std::polar(s, 0.3)) == doctest::Approx(lens / (pi * r * r)).epsilon(1e-12));
        }
        CHECK(hellinger_affinity(p, {1.0, 0.0}) == 0.0);
        CHECK(hellinger_affinity(p, {0.0, 1.5}) == 0.0);
        CHECK(std::isinf(log_hellinger_affinity(p, {1.2, 0.0})));
    }

    TEST_CASE("grid density overlap") {
        const auto single = NoiseModel(GridDensity{1.0, 1, {1.0}});
        CHECK(hellinger_affinity(single, {0.25, -0.5}) == doctest::Approx(0.75 * 0.5));
        const auto g = three_by_three();
        for (cplx d : {cplx{0.05, 0.0}, cplx{0.13, -0.27}, cplx{-0.31, 0.2}})
            CHECK(std::abs(hellinger_affinity(g, d) - hellinger_affinity_quadrature(g, d, 1e-10)) <= 1e-12);
        CHECK(hellinger_affinity(g, {0.7, 0.0}) == 0.0);
    }

    TEST_CASE("affinity gap constant") {
        std::vector<cplx> ladder;
        for (int k = 1; k <= 8; ++k) ladder.push_back({std::ldexp(1.0, -k), 0.0});
        const auto a1 = affinity_gap_constant(NoiseModel::gaussian(1.0), ladder);
        CHECK(a1.positive);
        CHECK(a1.ratios.back() == doctest::Approx(1.0 / 8.0).epsilon(1e-4));
        const auto a2 = affinity_gap_constant(NoiseModel::gaussian(2.0), ladder);
        CHECK(a2.constant == doctest::Approx(a1.constant / 4.0).epsilon(0.05));
        std::vector<cplx> neg;
        for (const auto& d : ladder) neg.push_back(-d);
        for (const auto& p : {NoiseModel::gaussian(1.0), NoiseModel::uniform_disk(1.0), three_by_three()})
            CHECK(affinity_gap_constant(p, ladder).constant == affinity_gap_constant(p, neg).constant);
        CHECK(affinity_gap_constant(NoiseModel::uniform_disk(1.0), ladder).positive);
        CHECK_THROWS_AS(affinity_gap_constant(NoiseModel::gaussian(1.0), std::vector<cplx>{{0.0, 0.0}}), InvalidArgument);
    }

    TEST_CASE("Kakutani products") {
        const auto p1 = NoiseModel::gaussian(1.0);
        const auto same = kakutani_from_gaps(std::vector<cplx>(1000), p1, {500, 1000});
        CHECK(same.partial.back() == 1.0);
        CHECK(same.classification == KakutaniClass::equivalent_evidence);

        std::vector<cplx> harmonic(100000);
        for (std::size_t k = 0; k < harmonic.size(); ++k) harmonic[k] = 1.0 / static_cast<double>(k + 1);
        const auto eq = kakutani_from_gaps(harmonic, p1, {1000, 10000, 50000, 100000});
        CHECK(std::abs(eq.partial.back() - std::exp(-pi * pi / 48.0)) <= 1e-3);
        CHECK(eq.classification == KakutaniClass::equivalent_evidence);

        std::vector<cplx> root(1000);
        for (std::size_t k = 0; k < root.size(); ++k) root[k] = 1.0 / std::sqrt(static_cast<double>(k + 1));
        const auto orth = kakutani_from_gaps(root, NoiseModel::gaussian(0.1), {125, 250, 500, 1000});
        double harm = 0.0;
        for (int k = 1; k <= 1000; ++k) harm += 1.0 / k;
        CHECK(orth.log_partial.back() == doctest::Approx(-harm / 0.08).epsilon(1e-12));
        CHECK(orth.classification == KakutaniClass::orthogonal_evidence);

        std::vector<cplx> far(10, cplx{3.0, 0.0});
        CHECK(kakutani_from_gaps(far, NoiseModel::uniform_disk(1.0), {10}).classification ==
              KakutaniClass::orthogonal_evidence);

        CHECK_THROWS_AS(kakutani_from_gaps(root, p1, {500, 400}), InvalidArgument);
        CHECK_THROWS_AS(kakutani_from_gaps(root, p1, {2000}), InvalidArgument);
    }
}
