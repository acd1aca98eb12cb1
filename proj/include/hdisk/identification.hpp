#pragma once

// Simulation of noisy observations X_n = S(z_n) + xi_n and recovery of S by energy-penalized
// least squares over Taylor polynomials.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hdisk/function_models.hpp"
#include "hdisk/measure_equivalence.hpp"
#include "hdisk/sampling_design.hpp"

namespace hdisk {

struct Observation {
    DiskPoint z;
    cplx x;
};

struct ObservationSeries {
    std::vector<Observation> observations;
    NoiseModel noise = NoiseModel::none();
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return observations.size(); }
};

// xi_n for observation index n. Each index owns a generator seeded from (seed, n), so extending a
// series leaves earlier draws unchanged.
cplx draw_noise(const NoiseModel& p, std::uint64_t seed, std::uint64_t n);

// E |xi|^2.
double noise_power(const NoiseModel& p);

ObservationSeries simulate_observations(const AnalyticModel& s, const SamplingPlan& plan, const NoiseModel& p,
                                        std::uint64_t seed);

struct FitConfig {
    int degree = 8;
    double lambda = 0.0;
    double alpha = 0.5;
    double validation_fraction = 0.0;

    void validate() const;
};

inline constexpr int candidate_degrees[] = {2, 4, 8, 16, 32};

struct FitResult {
    AnalyticModel fitted = AnalyticModel::taylor({cplx{0.0, 0.0}});
    std::vector<cplx> coefficients;
    int degree = 0;
    double residual_norm = 0.0;   // sqrt(sum |M(z_n) - X_n|^2)
    double penalty = 0.0;         // lambda * sum |c_j|^2 w_j(alpha)
    std::vector<std::pair<int, double>> validation_curve;  // (degree, holdout RMS residual)
};

// Minimizes sum |M(z_n) - X_n|^2 + lambda sum_j |c_j|^2 w_j(alpha) over c_0..c_degree. With a
// positive validation_fraction the degree is chosen from candidate_degrees on an interleaved
// holdout (every k-th observation) and the model is refit on all observations.
FitResult fit_model(const ObservationSeries& obs, const FitConfig& cfg);

// 8 radii 0.7 k / 8 (k = 1..8) by 64 equispaced angles.
std::vector<cplx> evaluation_grid();

// 256 equispaced angles on |z| = 0.95. Diagnostic only: truncation error dominates there.
std::vector<cplx> boundary_grid();

double sup_error(const AnalyticModel& fitted, const AnalyticModel& truth, const std::vector<cplx>& grid);

struct ExperimentCell {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    double sup_error = 0.0;
    double coefficient_error = 0.0;
    double boundary_sup_error = 0.0;  // on boundary_grid()
    int degree = 0;
    std::string message;
};

struct ExperimentReport {
    std::vector<std::size_t> ladder;
    std::vector<std::uint64_t> seeds;
    std::vector<ExperimentCell> cells;          // ladder-major, seed-minor
    std::vector<double> median_sup_error;       // per ladder entry, over successful seeds
    std::vector<double> median_coefficient_error;
    std::vector<double> median_boundary_sup_error;
    double slope = 0.0;                         // log median sup-error against log N
};

// One cell per (N, seed): simulate on the first N plan points, fit, score. Fit failures are
// recorded in the cell.
ExperimentReport consistency_experiment(const AnalyticModel& s, const SamplingPlan& plan, const NoiseModel& p,
                                        const FitConfig& cfg, std::vector<std::size_t> ladder,
                                        std::vector<std::uint64_t> seeds, bool parallel = true);

struct ResidualReport {
    std::size_t n = 0;
    double rss_true = 0.0;        // sum |X_n - f(z_n)|^2 with X simulated from f
    double rss_alternative = 0.0; // sum |X_n - g(z_n)|^2
    double relative_gap = 0.0;    // |rss_alternative - rss_true| / (N E|xi|^2)
    bool separating = false;      // relative_gap above the threshold
    TrendVerdict separation = TrendVerdict::inconclusive;
    KakutaniClass kakutani = KakutaniClass::inconclusive;
};

// Whether data simulated from f on the plan can tell f from g.
ResidualReport residual_separation(const AnalyticModel& f, const AnalyticModel& g, const SamplingPlan& plan,
                                   const NoiseModel& p, std::uint64_t seed, double threshold = 0.05);

// f + scale (1 - z)^2, a perturbation vanishing to second order at z = 1. Taylor and rational
// models only.
AnalyticModel perturb_at_one(const AnalyticModel& f, double scale = 0.5);

// Single ray at angle 0 with radii 1 - 2^-(4 + n/16), n = 0..count-1.
SamplingPlan single_ray_plan(std::size_t count = 256);

}  // namespace hdisk
