#include "hdisk/disk_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hdisk/errors.hpp"

namespace hdisk {

double wrap_angle(double theta) noexcept {
    double t = std::fmod(theta + pi, two_pi);
    if (t < 0.0) t += two_pi;
    t -= pi;
    // fmod can land exactly on pi after the shift for inputs like -pi - tiny.
    return t >= pi ? -pi : t;
}

DiskPoint::DiskPoint(double re, double im) : DiskPoint(cplx{re, im}) {}

DiskPoint::DiskPoint(cplx z) : z_(z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !(std::abs(z) < 1.0))
        throw InvalidArgument("point must satisfy |z| < 1", "z");
}

DiskPoint DiskPoint::polar(double radius, double theta) {
    return DiskPoint(std::polar(radius, theta));
}

Arc::Arc(double start, double length) : start_(wrap_angle(start)), length_(length) {
    if (!(length > 0.0) || length > two_pi * (1.0 + 1e-15))
        throw InvalidArgument("arc length must lie in (0, 2pi]", "length");
    length_ = std::min(length, two_pi);
}

bool Arc::contains(double theta) const noexcept {
    if (is_full_circle()) return true;
    double offset = wrap_angle(theta) - start_;
    if (offset < 0.0) offset += two_pi;
    return offset <= length_;
}

double Arc::distance(double theta) const noexcept {
    if (contains(theta)) return 0.0;
    auto circ = [](double a, double b) {
        double d = std::abs(wrap_angle(a - b));
        return std::min(d, two_pi - d);
    };
    return std::min(circ(theta, start_), circ(theta, start_ + length_));
}

double ZeroSequence::blaschke_sum() const noexcept {
    double s = 0.0;
    for (const auto& z : zeros) s += z.depth();
    return s;
}

double poisson_kernel(const DiskPoint& z, double t) noexcept {
    const double r2 = std::norm(z.value());
    return (1.0 - r2) / std::norm(z.value() - std::polar(1.0, t));
}

bool stolz_contains(const BoundaryPoint& y, const DiskPoint& z) noexcept {
    const double r = z.modulus();
    if (r == 0.0) return true;
    return std::abs(y.value() - z.value() / r) < 2.0 * (1.0 - r);
}

bool stolz_contains_unnormalized(const BoundaryPoint& y, const DiskPoint& z) noexcept {
    return std::abs(y.value() - z.value()) < 2.0 * z.depth();
}

double stolz_half_angle(double radius) noexcept {
    const double depth = 1.0 - radius;
    if (depth >= 1.0) return pi;
    // |e^{i d} - 1| = 2 |sin(d/2)| < 2 depth
    return 2.0 * std::asin(depth);
}

Arc boundary_arc(const DiskPoint& z) {
    const double r = z.modulus();
    if (r == 0.0) throw InvalidArgument("boundary arc of the center is the whole circle", "z");
    // |e^{i phi} - r e^{i psi}|^2 = 1 + r^2 - 2 r cos(phi - psi) <= 4 (1 - r)^2
    const double bound = 2.0 * (1.0 - r);
    const double c = (1.0 + r * r - bound * bound) / (2.0 * r);
    if (c <= -1.0) return Arc(-pi, two_pi);
    const double half = std::acos(std::clamp(c, -1.0, 1.0));
    return Arc(std::arg(z.value()) - half, 2.0 * half);
}

namespace {

cplx blaschke_factor(cplx a, cplx z) noexcept {
    const double m = std::abs(a);
    if (m == 0.0) return z;
    return (m / a) * (a - z) / (1.0 - std::conj(a) * z);
}

}  // namespace

cplx blaschke_product(std::span<const DiskPoint> zeros, cplx z) noexcept {
    cplx b{1.0, 0.0};
    for (const auto& a : zeros) b *= blaschke_factor(a.value(), z);
    return b;
}

cplx blaschke_product(const ZeroSequence& zeros, const DiskPoint& z) noexcept {
    return blaschke_product(std::span<const DiskPoint>(zeros.zeros), z.value());
}

double rho_sigma(const BoundaryPoint& xi, const ZeroSequence& zeros, double sigma) {
    if (zeros.empty()) throw InvalidArgument("zero sequence must be nonempty", "zeros");
    if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive", "sigma");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& z : zeros.zeros)
        best = std::min(best, std::abs(xi.value() - z.value()) / std::pow(z.depth(), sigma));
    return best;
}

double v_function(const ZeroSequence& zeros, const DiskPoint& z, double exponent) {
    if (zeros.empty()) throw InvalidArgument("zero sequence must be nonempty", "zeros");
    if (!(exponent > 0.0)) throw InvalidArgument("exponent must be positive", "exponent");
    const double weight = 1.0 - std::norm(z.value());
    double v = 0.0;
    for (const auto& w : zeros.zeros) {
        const double m = w.modulus();
        if (m == 0.0) continue;
        const double dist = std::abs(z.value() - w.value() / m);
        if (dist == 0.0) throw NumericFailure("v_function evaluated on a boundary direction");
        v += weight * w.depth() / std::pow(dist, exponent);
    }
    return v;
}

std::vector<DiskPoint> stolz_probe_points(const BoundaryPoint& y, int radial_levels,
                                          int angular_samples) {
    if (radial_levels < 1) throw InvalidArgument("need at least one radial level", "radial_levels");
    if (angular_samples < 1) throw InvalidArgument("need at least one angular sample", "angular_samples");
    std::vector<DiskPoint> probes;
    probes.reserve(static_cast<std::size_t>(radial_levels) * angular_samples);
    for (int m = 1; m <= radial_levels; ++m) {
        const double r = 1.0 - std::ldexp(1.0, -m);
        if (!(r < 1.0)) break;
        const double half = std::min(stolz_half_angle(r), pi);
        for (int i = 0; i < angular_samples; ++i) {
            // offsets strictly inside (-half, half)
            const double frac = -1.0 + (2.0 * i + 1.0) / angular_samples;
            probes.push_back(DiskPoint::polar(r, y.theta() + frac * half));
        }
    }
    return probes;
}

double nontangential_sup(const std::function<double(const DiskPoint&)>& u,
                         const std::function<double(double)>& g, const BoundaryPoint& y,
                         int radial_levels) {
    double best = 0.0;
    for (const auto& z : stolz_probe_points(y, radial_levels))
        best = std::max(best, u(z) / g(z.depth()));
    return best;
}

}  // namespace hdisk
