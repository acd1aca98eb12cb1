#include <doctest.h>

#include <random>

#include "hdisk/kernels.hpp"
#include "hdisk/sampling_design.hpp"

using namespace hdisk;

TEST_SUITE("kernels") {
    TEST_CASE("energy matrix: OpenMP equals serial") {
        const auto g = capacity_grid(BoundarySet::arcs({Arc(-1.0, 2.5), Arc(2.0, 0.7)}), 256);
        for (auto mode : {KernelMode::angular, KernelMode::chordal}) {
            const auto a = kernels::energy_matrix_serial(g.centers, g.cell_width, 0.6, mode);
            const auto b = kernels::energy_matrix_omp(g.centers, g.cell_width, 0.6, mode);
            CHECK(a == b);
        }
    }

    TEST_CASE("Stolz counts: OpenMP equals serial") {
        const auto plan = generate_dyadic(BoundarySet::arcs({Arc(0.5, 1.0)}), 9, 2);
        std::vector<double> angles(1000);
        for (std::size_t j = 0; j < angles.size(); ++j) angles[j] = -pi + two_pi * static_cast<double>(j) / 1000.0;
        CHECK(kernels::stolz_counts_serial(angles, plan.points) == kernels::stolz_counts_omp(angles, plan.points));
    }

    TEST_CASE("circular partition: OpenMP equals serial") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Arc> arcs;
            for (int i = 0; i < 40; ++i) arcs.emplace_back(-pi + two_pi * u(rng), 0.05 * u(rng) + 1e-3);
            const auto e = BoundarySet::arcs(arcs);
            const auto h = GaugeFunction::power(0.5);
            const kernels::PartitionProblem p(e.segments(), h);
            const auto a = kernels::circular_partition_serial(p);
            const auto b = kernels::circular_partition_omp(p);
            CHECK(a.value == b.value);
            REQUIRE(a.runs.size() == b.runs.size());
            for (std::size_t i = 0; i < a.runs.size(); ++i) {
                CHECK(a.runs[i].first == b.runs[i].first);
                CHECK(a.runs[i].count == b.runs[i].count);
            }
            // every linear DP is feasible, so none beats the circular optimum
            for (std::size_t s = 0; s < p.size(); ++s) CHECK(kernels::linear_partition(p, s).value >= a.value - 1e-12);
        }
    }
}
