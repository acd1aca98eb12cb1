// Serial reference against OpenMP for each data-parallel kernel.

#include <benchmark/benchmark.h>

#include <random>

#include "hdisk/kernels.hpp"
#include "hdisk/sampling_design.hpp"

namespace {

using namespace hdisk;

std::vector<double> centers(std::size_t m) {
    std::vector<double> c(m);
    for (std::size_t i = 0; i < m; ++i) c[i] = -pi + two_pi * (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    return c;
}

template <bool Parallel>
void energy_matrix(benchmark::State& state) {
    const auto c = centers(static_cast<std::size_t>(state.range(0)));
    const double w = two_pi / static_cast<double>(c.size());
    for (auto _ : state) {
        auto m = Parallel ? kernels::energy_matrix_omp(c, w, 0.5, KernelMode::angular)
                          : kernels::energy_matrix_serial(c, w, 0.5, KernelMode::angular);
        benchmark::DoNotOptimize(m.data());
    }
}

template <bool Parallel>
void stolz_counts(benchmark::State& state) {
    const auto plan = generate_dyadic(BoundarySet::full_circle(), static_cast<int>(state.range(0)));
    const auto a = centers(4096);
    for (auto _ : state) {
        auto c = Parallel ? kernels::stolz_counts_omp(a, plan.points) : kernels::stolz_counts_serial(a, plan.points);
        benchmark::DoNotOptimize(c.data());
    }
}

template <bool Parallel>
void circular_partition(benchmark::State& state) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto k = static_cast<std::size_t>(state.range(0));
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < k; ++i) {
        const double slot = two_pi / static_cast<double>(k);
        arcs.emplace_back(-pi + slot * (static_cast<double>(i) + 0.1 * u(rng)), slot * (0.2 + 0.5 * u(rng)));
    }
    const auto e = BoundarySet::arcs(arcs);
    const auto h = GaugeFunction::power(0.5);
    const kernels::PartitionProblem p(e.segments(), h);
    for (auto _ : state) {
        auto r = Parallel ? kernels::circular_partition_omp(p) : kernels::circular_partition_serial(p);
        benchmark::DoNotOptimize(r.value);
    }
}

}  // namespace

BENCHMARK(energy_matrix<false>)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(energy_matrix<true>)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(stolz_counts<false>)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK(stolz_counts<true>)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK(circular_partition<false>)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(circular_partition<true>)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
