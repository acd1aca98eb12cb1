#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an OpenMP version that
// must agree with it bit for bit; tests compare the two and bench/ times them.

#include <cstddef>
#include <span>
#include <vector>

#include "hdisk/disk_geometry.hpp"
#include "hdisk/geometric_measure.hpp"

namespace hdisk::kernels {

// Row-major M x M matrix of cell-averaged kernels between cells of equal width.
std::vector<double> energy_matrix_serial(std::span<const double> centers, double width, double alpha,
                                         KernelMode mode);
std::vector<double> energy_matrix_omp(std::span<const double> centers, double width, double alpha,
                                      KernelMode mode);

// For each boundary angle, the number of points whose Stolz region contains it.
std::vector<int> stolz_counts_serial(std::span<const double> angles, std::span<const DiskPoint> points);
std::vector<int> stolz_counts_omp(std::span<const double> angles, std::span<const DiskPoint> points);

// Partition of K circularly ordered pieces into runs, cost h(hull) per run.
class PartitionProblem {
public:
    PartitionProblem(const std::vector<Segment>& pieces, const GaugeFunction& h);

    std::size_t size() const noexcept { return k_; }
    // Cost of the run of pieces i..j in doubled (unwrapped) indexing, i <= j < i + K.
    double cost(std::size_t i, std::size_t j) const noexcept { return h_(e2_[j] - s2_[i]); }
    // Gap in front of piece i.
    double gap_before(std::size_t i) const noexcept;
    double piece_length(std::size_t i) const noexcept { return e2_[i] - s2_[i]; }

private:
    const GaugeFunction& h_;
    std::size_t k_;
    std::vector<double> s2_, e2_;
};

struct Partition {
    double value = 0.0;  // DP accumulation order
    std::vector<Run> runs;
};

// Optimal partition among those with a cut in front of piece `start`. O(K^2).
Partition linear_partition(const PartitionProblem& p, std::size_t start);

// Optimum over every starting cut. O(K^3).
Partition circular_partition_serial(const PartitionProblem& p);
Partition circular_partition_omp(const PartitionProblem& p);

}  // namespace hdisk::kernels
