#include "hdisk/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>

namespace hdisk::kernels {

namespace {

inline double kernel_entry(std::span<const double> c, std::size_t i, std::size_t j, double width, double alpha,
                           KernelMode mode) {
    double sep = std::abs(wrap_angle(c[i] - c[j]));
    return cell_averaged_kernel(sep, width, alpha, mode);
}

inline int stolz_count(double angle, std::span<const DiskPoint> points) {
    const BoundaryPoint y(angle);
    int n = 0;
    for (const auto& z : points) n += stolz_contains(y, z) ? 1 : 0;
    return n;
}

}  // namespace

std::vector<double> energy_matrix_serial(std::span<const double> centers, double width, double alpha,
                                         KernelMode mode) {
    const std::size_t m = centers.size();
    std::vector<double> k(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) k[i * m + j] = kernel_entry(centers, i, j, width, alpha, mode);
    return k;
}

std::vector<double> energy_matrix_omp(std::span<const double> centers, double width, double alpha,
                                      KernelMode mode) {
    const auto m = static_cast<std::ptrdiff_t>(centers.size());
    std::vector<double> k(static_cast<std::size_t>(m * m));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < m; ++i)
        for (std::ptrdiff_t j = 0; j < m; ++j)
            k[static_cast<std::size_t>(i * m + j)] =
                kernel_entry(centers, static_cast<std::size_t>(i), static_cast<std::size_t>(j), width, alpha, mode);
    return k;
}

std::vector<int> stolz_counts_serial(std::span<const double> angles, std::span<const DiskPoint> points) {
    std::vector<int> counts(angles.size());
    for (std::size_t g = 0; g < angles.size(); ++g) counts[g] = stolz_count(angles[g], points);
    return counts;
}

std::vector<int> stolz_counts_omp(std::span<const double> angles, std::span<const DiskPoint> points) {
    const auto n = static_cast<std::ptrdiff_t>(angles.size());
    std::vector<int> counts(angles.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t g = 0; g < n; ++g) counts[static_cast<std::size_t>(g)] = stolz_count(angles[g], points);
    return counts;
}

PartitionProblem::PartitionProblem(const std::vector<Segment>& pieces, const GaugeFunction& h)
    : h_(h), k_(pieces.size()), s2_(2 * pieces.size()), e2_(2 * pieces.size()) {
    for (std::size_t i = 0; i < 2 * k_; ++i) {
        const auto& seg = pieces[i % k_];
        s2_[i] = seg.start + (i >= k_ ? two_pi : 0.0);
        e2_[i] = s2_[i] + seg.length;
    }
}

double PartitionProblem::gap_before(std::size_t i) const noexcept {
    i %= k_;
    const std::size_t at = i + k_;
    return s2_[at] - e2_[at - 1];
}

Partition linear_partition(const PartitionProblem& p, std::size_t start) {
    const std::size_t k = p.size();
    std::vector<double> best(k + 1, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> parent(k + 1, 0);
    best[0] = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
        const std::size_t last = start + j - 1;
        for (std::size_t i = 0; i < j; ++i) {
            const double c = best[i] + p.cost(start + i, last);
            if (c < best[j]) {
                best[j] = c;
                parent[j] = i;
            }
        }
    }
    Partition out;
    out.value = best[k];
    for (std::size_t j = k; j > 0; j = parent[j])
        out.runs.push_back(Run{(start + parent[j]) % k, j - parent[j]});
    std::reverse(out.runs.begin(), out.runs.end());
    return out;
}

namespace {

std::size_t first_minimum(const std::vector<double>& values) {
    return static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
}

}  // namespace

Partition circular_partition_serial(const PartitionProblem& p) {
    std::vector<double> value(p.size());
    for (std::size_t s = 0; s < p.size(); ++s) value[s] = linear_partition(p, s).value;
    return linear_partition(p, first_minimum(value));
}

Partition circular_partition_omp(const PartitionProblem& p) {
    const auto k = static_cast<std::ptrdiff_t>(p.size());
    std::vector<double> value(p.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t s = 0; s < k; ++s)
        value[static_cast<std::size_t>(s)] = linear_partition(p, static_cast<std::size_t>(s)).value;
    return linear_partition(p, first_minimum(value));
}

}  // namespace hdisk::kernels
