#pragma once

// Geometry of the open unit disk D and its boundary circle T.

#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace hdisk {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Maps any angle into [-pi, pi).
double wrap_angle(double theta) noexcept;

// A point z with |z| < 1. Construction outside the open disk throws InvalidArgument.
class DiskPoint {
public:
    DiskPoint() = default;
    DiskPoint(double re, double im);
    explicit DiskPoint(cplx z);

    static DiskPoint polar(double radius, double theta);

    cplx value() const noexcept { return z_; }
    double re() const noexcept { return z_.real(); }
    double im() const noexcept { return z_.imag(); }
    double modulus() const noexcept { return std::abs(z_); }
    // 1 - |z|, the distance to the boundary.
    double depth() const noexcept { return 1.0 - std::abs(z_); }

    friend bool operator==(const DiskPoint&, const DiskPoint&) = default;

private:
    cplx z_{0.0, 0.0};
};

// e^{i theta} with theta normalized into [-pi, pi).
class BoundaryPoint {
public:
    BoundaryPoint() = default;
    explicit BoundaryPoint(double theta) : theta_(wrap_angle(theta)) {}

    double theta() const noexcept { return theta_; }
    cplx value() const noexcept { return std::polar(1.0, theta_); }

private:
    double theta_ = -pi;
};

// Closed arc {e^{i t} : start <= t <= start + length}, arithmetic modulo 2 pi.
class Arc {
public:
    Arc(double start, double length);

    double start() const noexcept { return start_; }
    double length() const noexcept { return length_; }
    double end() const noexcept { return start_ + length_; }  // not wrapped
    double center() const noexcept { return wrap_angle(start_ + 0.5 * length_); }
    bool is_full_circle() const noexcept { return length_ >= two_pi; }

    bool contains(double theta) const noexcept;
    // Angular distance from theta to the arc (0 inside).
    double distance(double theta) const noexcept;

private:
    double start_;   // in [-pi, pi)
    double length_;  // in (0, 2 pi]
};

// Finite zero set Lambda = {z_k} of a Blaschke product.
struct ZeroSequence {
    std::vector<DiskPoint> zeros;

    bool empty() const noexcept { return zeros.empty(); }
    std::size_t size() const noexcept { return zeros.size(); }
    // Sum of (1 - |z_k|).
    double blaschke_sum() const noexcept;
};

// (1 - |z|^2) / |z - e^{it}|^2
double poisson_kernel(const DiskPoint& z, double t) noexcept;

// Nontangential approach region at y: |e^{i theta_y} - z/|z|| < 2 (1 - |z|).
// The center belongs to every region.
bool stolz_contains(const BoundaryPoint& y, const DiskPoint& z) noexcept;

// Unnormalized variant |e^{i theta_y} - z| < 2 (1 - |z|).
bool stolz_contains_unnormalized(const BoundaryPoint& y, const DiskPoint& z) noexcept;

// Half-angle of the Stolz region at depth 1 - r, i.e. the largest |theta - arg z| accepted by
// stolz_contains for a point of modulus r.
double stolz_half_angle(double radius) noexcept;

// {w in T : |w - z| <= 2 (1 - |z|)}. Throws InvalidArgument for z = 0.
Arc boundary_arc(const DiskPoint& z);

// prod_k (|a_k|/a_k) (a_k - z) / (1 - conj(a_k) z); a zero at the origin contributes z.
cplx blaschke_product(const ZeroSequence& zeros, const DiskPoint& z) noexcept;
cplx blaschke_product(std::span<const DiskPoint> zeros, cplx z) noexcept;

// min_k |xi - z_k| / (1 - |z_k|)^sigma. Throws on an empty sequence or sigma <= 0.
double rho_sigma(const BoundaryPoint& xi, const ZeroSequence& zeros, double sigma);

// sum_n (1 - |z|^2)(1 - |w_n|) / |z - w_n/|w_n||^exponent.
// Zeros at the origin have no boundary direction and are skipped.
double v_function(const ZeroSequence& zeros, const DiskPoint& z, double exponent = 2.0);

// Radii 1 - 2^-m (m = 1..levels) times angular offsets inside the Stolz region of y.
std::vector<DiskPoint> stolz_probe_points(const BoundaryPoint& y, int radial_levels,
                                          int angular_samples = 5);

// max over stolz_probe_points(y) of u(z) / g(1 - |z|). A lower bound for the supremum over
// the whole region.
double nontangential_sup(const std::function<double(const DiskPoint&)>& u,
                         const std::function<double(double)>& g, const BoundaryPoint& y,
                         int radial_levels);

}  // namespace hdisk
