#pragma once

// Hellinger affinity of shifted planar noise laws and Kakutani's dichotomy for their infinite
// products.

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hdisk/function_models.hpp"
#include "hdisk/sampling_design.hpp"

namespace hdisk {

// P(z) = exp(-|z|^2 / 2 sigma^2) / (2 pi sigma^2)
struct Gaussian2D {
    double sigma;
};

// Uniform on the disk |z| < radius.
struct UniformDisk {
    double radius;
};

// Piecewise constant on an n x n grid of square cells of side cell_width centered at the origin.
// weights[i * n + j] is the mass of the cell with center ((j - (n-1)/2) w, (i - (n-1)/2) w).
struct GridDensity {
    double cell_width;
    std::size_t n;
    std::vector<double> weights;
};

// Degenerate zero noise: the sigma -> 0 limit used for noiseless simulation.
struct NoNoise {};

class NoiseModel {
public:
    using Variant = std::variant<Gaussian2D, UniformDisk, GridDensity, NoNoise>;

    // Validates the parameters, unit mass and zero mean (1e-8) of grid densities.
    explicit NoiseModel(Variant v);
    static NoiseModel gaussian(double sigma) { return NoiseModel(Gaussian2D{sigma}); }
    static NoiseModel uniform_disk(double radius) { return NoiseModel(UniformDisk{radius}); }
    static NoiseModel none() { return NoiseModel(NoNoise{}); }

    const Variant& variant() const noexcept { return v_; }
    double density(cplx z) const noexcept;
    std::string describe() const;

private:
    Variant v_;
};

// int int sqrt(P(z) P(z - d)) dx dy. Closed form for Gaussian noise, support-aware quadrature
// for the others; exactly 0 for disjoint supports.
double hellinger_affinity(const NoiseModel& p, cplx d);
// log of the affinity without forming it (exact for Gaussian noise, -inf for disjoint supports).
double log_hellinger_affinity(const NoiseModel& p, cplx d);

// The same integral by adaptive tensor Gauss-Kronrod quadrature over a box around the overlap,
// for any variant with a density.
double hellinger_affinity_quadrature(const NoiseModel& p, cplx d, double tolerance = 1e-12);

struct AffinityGap {
    double constant = 0.0;              // min over the ladder of (1 - rho(d)) / |d|^2
    std::vector<double> ratios;         // per ladder entry
    bool positive = false;
};

// Empirical constant A in 1 - rho(d) >= A |d|^2 on a ladder of small shifts.
AffinityGap affinity_gap_constant(const NoiseModel& p, std::span<const cplx> shift_ladder);

enum class KakutaniClass { orthogonal_evidence, equivalent_evidence, inconclusive };
std::string to_string(KakutaniClass c);

struct KakutaniThresholds {
    double orthogonal_log = -30.0;     // log rho_N below this ...
    double orthogonal_slope = -0.1;    // ... while d log rho / d log N stays below this
    double equivalent_cauchy = 1e-3;   // |log rho_{N_last} - log rho_{N_prev}| below this
};

struct KakutaniReport {
    std::vector<std::size_t> ladder;
    std::vector<double> log_partial;    // log rho_N per ladder entry
    std::vector<double> partial;        // rho_N per ladder entry
    std::vector<cplx> gaps;             // f(z_k) - g(z_k)
    std::vector<double> log_factors;    // log rho(mu_k, nu_k)
    KakutaniClass classification = KakutaniClass::inconclusive;
};

// Product of the per-observation affinities for the given gaps, accumulated in log space
// (compensated) in ascending k.
KakutaniReport kakutani_from_gaps(std::vector<cplx> gaps, const NoiseModel& p, std::vector<std::size_t> ladder,
                                  const KakutaniThresholds& t = {});

KakutaniReport kakutani_product(const AnalyticModel& f, const AnalyticModel& g, const SamplingPlan& plan,
                                const NoiseModel& p, std::vector<std::size_t> ladder,
                                const KakutaniThresholds& t = {});

}  // namespace hdisk
