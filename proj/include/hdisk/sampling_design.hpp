#pragma once

// Sampling sequences {z_n} accumulating nontangentially at a target boundary set, with the
// validators that check them against that set.

#include <optional>
#include <string>
#include <vector>

#include "hdisk/disk_geometry.hpp"
#include "hdisk/function_models.hpp"
#include "hdisk/geometric_measure.hpp"

namespace hdisk {

struct DyadicScheme {
    int levels = 1;
    int density_factor = 1;
};

struct RadialRayScheme {
    std::vector<double> anchor_angles;
    std::vector<double> radii;
};

struct CustomScheme {};

using SamplingScheme = std::variant<DyadicScheme, RadialRayScheme, CustomScheme>;
std::string scheme_name(const SamplingScheme& s);

struct SamplingPlan {
    std::vector<DiskPoint> points;
    BoundarySet target = BoundarySet::full_circle();
    SamplingScheme scheme = CustomScheme{};

    std::size_t size() const noexcept { return points.size(); }
    // First n points (same target, custom scheme unless n covers the whole plan).
    SamplingPlan prefix(std::size_t n) const;
    // Finite stand-in for |z_n| -> 1: the largest 1 - |z_n| over the last quarter is below the
    // largest over the first quarter.
    bool tail_condition() const noexcept;
};

inline constexpr std::size_t max_plan_points = 10'000'000;

// Level m = 1..levels sits on radius 1 - 2^-m at angles -pi + k step, step = 2^-m / density_factor,
// keeping the angles within one step of E. Within a level the angles are emitted in bit-reversed
// order so that prefixes of a level are spread over E.
SamplingPlan generate_dyadic(const BoundarySet& e, int levels, int density_factor = 1);

// Every radius on every anchor ray, ray by ray in the order given.
SamplingPlan generate_radial_ray(const BoundarySet& e, std::vector<double> anchor_angles, std::vector<double> radii);

struct CoverageReport {
    int grid = 0;
    int threshold = 1;                  // counts below this are uncovered
    std::vector<double> angles;         // grid angles
    std::vector<int> counts;            // Stolz-region hits per grid angle
    std::vector<bool> in_target;
    std::size_t target_points = 0;
    int min_count = 0;                  // over grid angles inside E
    double uncovered_fraction = 1.0;    // inside E
    double uncovered_fraction_outside = 1.0;
};

// Counts, for `grid` equispaced boundary angles, the plan points whose Stolz region contains the
// angle. The threshold is levels/2 for dyadic plans (a finite proxy for a subsequence) and 1
// otherwise.
CoverageReport validate_coverage(const SamplingPlan& plan, int grid, bool parallel = true);

enum class TrendVerdict { divergent, convergent, inconclusive };
std::string to_string(TrendVerdict v);

struct BlaschkeSumReport {
    double total = 0.0;
    std::vector<int> levels;          // dyadic level m of 1 - |z| ~ 2^-m
    std::vector<double> level_sums;   // sum of 1 - |z| per level
    double level_slope = 0.0;         // least-squares slope of log2(level sum) against m
    TrendVerdict verdict = TrendVerdict::inconclusive;
};

// sum (1 - |z_n|) with a per-level growth diagnostic: slope > -0.1 divergent, < -0.5 convergent.
BlaschkeSumReport blaschke_sum(const SamplingPlan& plan);

struct TrendThresholds {
    double divergent_slope = 0.2;
    double convergent_slope = 0.05;
};

struct SeparationSeries {
    std::vector<double> partial_sums;  // S_N, N = 1..prefix
    double slope = 0.0;                // log S_N against log N over the second half
    bool identically_zero = false;
    TrendVerdict verdict = TrendVerdict::inconclusive;
};

// Least-squares slope of log y against log x over the second half of a positive series indexed
// from 1.
double loglog_tail_slope(const std::vector<double>& series);

// S_N = sum_{k <= N} |f(z_k) - g(z_k)|^2.
SeparationSeries separation_sum(const AnalyticModel& f, const AnalyticModel& g, const SamplingPlan& plan,
                                std::size_t prefix, const TrendThresholds& t = {});

}  // namespace hdisk
