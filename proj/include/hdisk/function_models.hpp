#pragma once

// Bounded analytic models on the disk, boundary traces and the associated norms and energies.

#include <string>
#include <variant>
#include <vector>

#include "hdisk/disk_geometry.hpp"

namespace hdisk {

struct TaylorPolynomial {
    std::vector<cplx> coefficients;  // c_0 .. c_d
};

struct RationalFunction {
    std::vector<cplx> numerator;    // ascending powers
    std::vector<cplx> denominator;  // ascending powers, no roots in |z| <= 1 + margin
};

struct FiniteBlaschke {
    ZeroSequence zeros;
    cplx unimodular_constant{1.0, 0.0};
};

enum class ModelKind { taylor, rational, blaschke };

class AnalyticModel {
public:
    static constexpr double default_pole_margin = 1e-6;

    static AnalyticModel taylor(std::vector<cplx> coefficients);
    // Throws InvalidArgument if the denominator has a root with modulus <= 1 + pole_margin.
    static AnalyticModel rational(std::vector<cplx> numerator, std::vector<cplx> denominator,
                                  double pole_margin = default_pole_margin);
    static AnalyticModel blaschke(ZeroSequence zeros, cplx unimodular_constant = {1.0, 0.0});

    ModelKind kind() const noexcept;
    const TaylorPolynomial* as_taylor() const noexcept { return std::get_if<TaylorPolynomial>(&v_); }
    const RationalFunction* as_rational() const noexcept { return std::get_if<RationalFunction>(&v_); }
    const FiniteBlaschke* as_blaschke() const noexcept { return std::get_if<FiniteBlaschke>(&v_); }

    cplx evaluate(const DiskPoint& z) const noexcept { return evaluate_at(z.value()); }
    cplx derivative(const DiskPoint& z) const noexcept { return derivative_at(z.value()); }

    // Unchecked evaluation, valid on the closed disk (every variant is analytic across |z| = 1).
    cplx evaluate_at(cplx z) const noexcept;
    cplx derivative_at(cplx z) const noexcept;

    // First degree + 1 Taylor coefficients at the origin.
    std::vector<cplx> taylor_coefficients(int degree) const;

    std::string describe() const;

private:
    using Variant = std::variant<TaylorPolynomial, RationalFunction, FiniteBlaschke>;
    explicit AnalyticModel(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

// Seven fixed test models: z; 1 + 0.5z^2 - 0.2z^6; 0.3 - 0.4z^3; 1/(1 - 0.5z);
// (0.2 + z)/(1 + 0.3z^2); the Blaschke product with zeros {0.5, -0.3i}; and the Blaschke
// product with zero 0.7e^{i} times e^{0.4i}.
std::vector<AnalyticModel> stock_family();

// Roots of sum_k c_k z^k via companion-matrix eigenvalues. Trailing zero coefficients are
// dropped.
std::vector<cplx> polynomial_roots(const std::vector<cplx>& coefficients);

// Equispaced boundary samples f(theta_j), theta_j = -pi + 2 pi j / N, N a power of two >= 16.
class BoundaryFunction {
public:
    explicit BoundaryFunction(std::vector<cplx> samples);

    template <class F>
    static BoundaryFunction sample(F&& f, std::size_t n) {
        std::vector<cplx> s(n);
        for (std::size_t j = 0; j < n; ++j) s[j] = f(angle(j, n));
        return BoundaryFunction(std::move(s));
    }
    static BoundaryFunction trace(const AnalyticModel& m, std::size_t n);

    static double angle(std::size_t j, std::size_t n) noexcept;
    double angle(std::size_t j) const noexcept { return angle(j, samples_.size()); }
    double step() const noexcept { return two_pi / static_cast<double>(samples_.size()); }

    std::size_t size() const noexcept { return samples_.size(); }
    const std::vector<cplx>& samples() const noexcept { return samples_; }
    cplx operator[](std::size_t j) const noexcept { return samples_[j]; }

    // Every second sample.
    BoundaryFunction coarsen() const;

private:
    std::vector<cplx> samples_;
};

struct QuadratureSpec {
    int radial_nodes = 24;                  // Gauss-Legendre nodes per radial panel
    int angular_nodes = 64;                 // trapezoid nodes on each circle
    int singularity_refinement_depth = 20;  // geometric panels toward r = 1

    void validate() const;
};

// 2 pi j^2 B(2j, alpha + 1): the weighted Dirichlet energy of z^j.
double monomial_energy_weight(int j, double alpha);

// int_D |f'(z)|^2 (1 - |z|)^alpha dA. Exact diagonal form for Taylor polynomials, tensor
// quadrature otherwise.
double dirichlet_energy(const AnalyticModel& m, double alpha, const QuadratureSpec& q = {});

// Tensor quadrature in (r, theta) for any variant: Gauss-Legendre on panels
// [1 - 2^-k, 1 - 2^-(k+1)] and a trapezoid rule in theta. Non-polynomial variants double the
// angular resolution until the value settles.
double dirichlet_energy_quadrature(const AnalyticModel& m, double alpha, const QuadratureSpec& q = {});

struct BesovResult {
    double value = 0.0;            // ||f||_alpha^2 on the finest grid, +inf when divergent
    bool divergent = false;        // refinement Cauchy test failed
    std::vector<double> estimates;  // finest first: N, N/2, N/4
};

// ||f||^2_alpha = int |f|^2 + int int |f(x) - f(y)|^2 / |x - y|^{1 + 2 alpha}.
BesovResult besov_norm(const BoundaryFunction& f, double alpha);

// Same discretization at the given resolution only, no refinement test.
double besov_norm_estimate(const BoundaryFunction& f, double alpha);

// Largest windowed average (1/2d) int_{t-d}^{t+d} |g| over d = 2 pi 2^-j, j = 0..log2 N, with g
// piecewise constant on cells centered at the samples and continued periodically.
double maximal_function(const BoundaryFunction& g, double t);

// (1/2 pi) int P(z, t) f(t) dt by the trapezoid rule. Requires |z| <= 1 - 1e-6.
cplx poisson_extend(const BoundaryFunction& f, const DiskPoint& z);

}  // namespace hdisk
