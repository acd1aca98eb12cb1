#include "hdisk/measure_equivalence.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hdisk/errors.hpp"
#include "hdisk/quadrature.hpp"

namespace hdisk {

namespace {

cplx grid_center(const GridDensity& g, std::size_t i, std::size_t j) {
    const double half = 0.5 * (static_cast<double>(g.n) - 1.0);
    return {(static_cast<double>(j) - half) * g.cell_width, (static_cast<double>(i) - half) * g.cell_width};
}

}  // namespace

NoiseModel::NoiseModel(Variant v) : v_(std::move(v)) {
    if (const auto* g = std::get_if<Gaussian2D>(&v_)) {
        if (!(g->sigma > 0.0) || !std::isfinite(g->sigma)) throw InvalidArgument("sigma must be positive", "noise.sigma");
    } else if (const auto* u = std::get_if<UniformDisk>(&v_)) {
        if (!(u->radius > 0.0) || !std::isfinite(u->radius))
            throw InvalidArgument("radius must be positive", "noise.radius");
    } else if (const auto* g = std::get_if<GridDensity>(&v_)) {
        if (!(g->cell_width > 0.0)) throw InvalidArgument("cell width must be positive", "noise.cell_width");
        if (g->n == 0 || g->weights.size() != g->n * g->n)
            throw InvalidArgument("weights must form an n x n grid", "noise.weights");
        double mass = 0.0;
        cplx mean{0.0, 0.0};
        for (std::size_t i = 0; i < g->n; ++i)
            for (std::size_t j = 0; j < g->n; ++j) {
                const double w = g->weights[i * g->n + j];
                if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("weights must be nonnegative", "noise.weights");
                mass += w;
                mean += w * grid_center(*g, i, j);
            }
        if (std::abs(mass - 1.0) > 1e-8) throw InvalidArgument("weights must sum to 1", "noise.weights");
        if (std::abs(mean) > 1e-8) throw InvalidArgument("density must have zero mean", "noise.weights");
    }
}

double NoiseModel::density(cplx z) const noexcept {
    if (const auto* g = std::get_if<Gaussian2D>(&v_)) {
        const double s2 = g->sigma * g->sigma;
        return std::exp(-std::norm(z) / (2.0 * s2)) / (two_pi * s2);
    }
    if (const auto* u = std::get_if<UniformDisk>(&v_))
        return std::abs(z) < u->radius ? 1.0 / (pi * u->radius * u->radius) : 0.0;
    if (const auto* g = std::get_if<GridDensity>(&v_)) {
        const double half = 0.5 * static_cast<double>(g->n);
        const double fx = z.real() / g->cell_width + half;
        const double fy = z.imag() / g->cell_width + half;
        if (fx < 0.0 || fy < 0.0) return 0.0;
        const auto j = static_cast<std::size_t>(fx);
        const auto i = static_cast<std::size_t>(fy);
        if (i >= g->n || j >= g->n) return 0.0;
        return g->weights[i * g->n + j] / (g->cell_width * g->cell_width);
    }
    return 0.0;
}

std::string NoiseModel::describe() const {
    std::ostringstream os;
    if (const auto* g = std::get_if<Gaussian2D>(&v_))
        os << "gaussian(sigma=" << g->sigma << ")";
    else if (const auto* u = std::get_if<UniformDisk>(&v_))
        os << "uniform_disk(radius=" << u->radius << ")";
    else if (const auto* g = std::get_if<GridDensity>(&v_))
        os << "grid(" << g->n << "x" << g->n << ", w=" << g->cell_width << ")";
    else
        os << "none";
    return os.str();
}

std::string to_string(KakutaniClass c) {
    switch (c) {
        case KakutaniClass::orthogonal_evidence: return "orthogonal-evidence";
        case KakutaniClass::equivalent_evidence: return "equivalent-evidence";
        case KakutaniClass::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

// Lens of two disks of radius r whose centers are s apart, measured in units of the disk area.
double uniform_disk_affinity(double r, double s) {
    if (s >= 2.0 * r) return 0.0;
    if (s == 0.0) return 1.0;
    // x along the line of centers; the half-height is set by the nearer boundary
    auto height = [&](double x) {
        const double a = r * r - x * x;
        const double b = r * r - (x - s) * (x - s);
        return 2.0 * std::sqrt(std::max(0.0, std::min(a, b)));
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double area = ts.integrate(height, s - r, 0.5 * s) + ts.integrate(height, 0.5 * s, r);
    return area / (pi * r * r);
}

double grid_affinity(const GridDensity& g, cplx d) {
    const double w = g.cell_width;
    const auto n = static_cast<std::int64_t>(g.n);
    // shifted density P(z - d) has cell (k, l) centered at center(k, l) + d
    const double sx = d.real() / w, sy = d.imag() / w;
    const auto bx = static_cast<std::int64_t>(std::floor(sx));
    const auto by = static_cast<std::int64_t>(std::floor(sy));
    CompensatedSum total;
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) {
            const double wij = g.weights[static_cast<std::size_t>(i * n + j)];
            if (wij == 0.0) continue;
            for (std::int64_t k = i - by - 1; k <= i - by; ++k) {
                if (k < 0 || k >= n) continue;
                const double oy = std::max(0.0, 1.0 - std::abs(static_cast<double>(i - k) - sy));
                for (std::int64_t l = j - bx - 1; l <= j - bx; ++l) {
                    if (l < 0 || l >= n) continue;
                    const double ox = std::max(0.0, 1.0 - std::abs(static_cast<double>(j - l) - sx));
                    const double wkl = g.weights[static_cast<std::size_t>(k * n + l)];
                    total.add(std::sqrt(wij * wkl) * ox * oy);
                }
            }
        }
    return std::clamp(total.value(), 0.0, 1.0);
}

}  // namespace

double hellinger_affinity(const NoiseModel& p, cplx d) {
    const auto& v = p.variant();
    if (const auto* g = std::get_if<Gaussian2D>(&v)) return std::exp(-std::norm(d) / (8.0 * g->sigma * g->sigma));
    if (const auto* u = std::get_if<UniformDisk>(&v)) return uniform_disk_affinity(u->radius, std::abs(d));
    if (const auto* g = std::get_if<GridDensity>(&v)) return grid_affinity(*g, d);
    return d == cplx{0.0, 0.0} ? 1.0 : 0.0;
}

double log_hellinger_affinity(const NoiseModel& p, cplx d) {
    if (const auto* g = std::get_if<Gaussian2D>(&p.variant())) return -std::norm(d) / (8.0 * g->sigma * g->sigma);
    const double rho = hellinger_affinity(p, d);
    return rho > 0.0 ? std::log(rho) : -std::numeric_limits<double>::infinity();
}

double hellinger_affinity_quadrature(const NoiseModel& p, cplx d, double tolerance) {
    const auto& v = p.variant();
    if (std::holds_alternative<NoNoise>(v)) return hellinger_affinity(p, d);
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto integrand = [&](double x, double y) {
        const cplx z{x, y};
        return std::sqrt(p.density(z) * p.density(z - d));
    };
    auto rectangle = [&](double x0, double x1, double y0, double y1) {
        return GK::integrate(
            [&](double x) { return GK::integrate([&](double y) { return integrand(x, y); }, y0, y1, 15, tolerance); },
            x0, x1, 15, tolerance);
    };

    if (const auto* g = std::get_if<Gaussian2D>(&v)) {
        // both factors are negligible beyond 12 sigma of the midpoint
        const double reach = 12.0 * g->sigma;
        const cplx c = 0.5 * d;
        return rectangle(c.real() - reach, c.real() + reach, c.imag() - reach, c.imag() + reach);
    }
    if (const auto* u = std::get_if<UniformDisk>(&v)) {
        // the inner range is the intersection of the two chords at abscissa x
        const double r = u->radius;
        const double x0 = std::max(-r, d.real() - r), x1 = std::min(r, d.real() + r);
        if (!(x0 < x1)) return 0.0;
        auto chord = [&](double x) {
            const double a = std::sqrt(std::max(0.0, r * r - x * x));
            const double b = std::sqrt(std::max(0.0, r * r - (x - d.real()) * (x - d.real())));
            const double lo = std::max(-a, d.imag() - b), hi = std::min(a, d.imag() + b);
            if (!(lo < hi)) return 0.0;
            return GK::integrate([&](double y) { return integrand(x, y); }, lo, hi, 15, tolerance);
        };
        // the active chord endpoints switch where the two circles cross
        std::vector<double> cuts{x0, x1};
        const double s = std::abs(d);
        if (s > 0.0 && s < 2.0 * r) {
            const double h = std::sqrt(r * r - 0.25 * s * s);
            for (double sign : {-1.0, 1.0}) {
                const double x = (0.5 * d + sign * h * cplx{0.0, 1.0} * d / s).real();
                if (x > x0 && x < x1) cuts.push_back(x);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        boost::math::quadrature::tanh_sinh<double> ts;
        CompensatedSum total;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            if (cuts[i + 1] > cuts[i]) total.add(ts.integrate(chord, cuts[i], cuts[i + 1]));
        return total.value();
    }
    // grid densities: split at the cell edges of both factors so each piece is constant
    const auto& g = std::get<GridDensity>(v);
    const double half = 0.5 * g.cell_width * static_cast<double>(g.n);
    auto edges = [&](double shift) {
        std::vector<double> e;
        for (std::size_t k = 0; k <= g.n; ++k) e.push_back(-half + static_cast<double>(k) * g.cell_width);
        for (std::size_t k = 0; k <= g.n; ++k) e.push_back(-half + static_cast<double>(k) * g.cell_width + shift);
        const double lo = std::max(-half, shift - half), hi = std::min(half, shift + half);
        std::vector<double> out;
        for (double x : e)
            if (x >= lo && x <= hi) out.push_back(x);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    const auto xs = edges(d.real()), ys = edges(d.imag());
    CompensatedSum total;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        for (std::size_t j = 0; j + 1 < ys.size(); ++j)
            if (xs[i + 1] > xs[i] && ys[j + 1] > ys[j]) total.add(rectangle(xs[i], xs[i + 1], ys[j], ys[j + 1]));
    return total.value();
}

AffinityGap affinity_gap_constant(const NoiseModel& p, std::span<const cplx> shift_ladder) {
    if (shift_ladder.empty()) throw InvalidArgument("shift ladder must be nonempty", "shift_ladder");
    AffinityGap out;
    out.constant = std::numeric_limits<double>::infinity();
    for (const auto& d : shift_ladder) {
        const double m2 = std::norm(d);
        if (!(m2 > 0.0)) throw InvalidArgument("shifts must be nonzero", "shift_ladder");
        double one_minus;
        if (const auto* g = std::get_if<Gaussian2D>(&p.variant()))
            one_minus = -std::expm1(-m2 / (8.0 * g->sigma * g->sigma));
        else
            one_minus = 1.0 - hellinger_affinity(p, d);
        out.ratios.push_back(one_minus / m2);
        out.constant = std::min(out.constant, out.ratios.back());
    }
    out.positive = out.constant > 0.0;
    return out;
}

KakutaniReport kakutani_from_gaps(std::vector<cplx> gaps, const NoiseModel& p, std::vector<std::size_t> ladder,
                                  const KakutaniThresholds& t) {
    if (ladder.empty()) throw InvalidArgument("ladder must be nonempty", "ladder");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (ladder[i] == 0 || (i > 0 && ladder[i] <= ladder[i - 1]))
            throw InvalidArgument("ladder must be positive and increasing", "ladder");
    }
    if (ladder.back() > gaps.size()) throw InvalidArgument("ladder exceeds the number of gaps", "ladder");
    gaps.resize(ladder.back());

    KakutaniReport r;
    r.ladder = std::move(ladder);
    r.gaps = std::move(gaps);
    r.log_factors.resize(r.gaps.size());
    const auto n = static_cast<std::ptrdiff_t>(r.gaps.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k)
        r.log_factors[static_cast<std::size_t>(k)] = log_hellinger_affinity(p, r.gaps[static_cast<std::size_t>(k)]);

    CompensatedSum acc;
    bool singular = false;
    std::size_t next = 0;
    for (std::size_t k = 0; k < r.log_factors.size(); ++k) {
        if (std::isinf(r.log_factors[k]))
            singular = true;
        else
            acc.add(r.log_factors[k]);
        if (k + 1 == r.ladder[next]) {
            const double lp = singular ? -std::numeric_limits<double>::infinity() : acc.value();
            r.log_partial.push_back(lp);
            r.partial.push_back(std::exp(lp));
            ++next;
        }
    }

    const double last = r.log_partial.back();
    if (std::isinf(last)) {
        r.classification = KakutaniClass::orthogonal_evidence;
    } else if (r.ladder.size() >= 2) {
        const std::size_t b = r.ladder.size() - 1;
        const double prev = r.log_partial[b - 1];
        const double slope = (last - prev) / (std::log(static_cast<double>(r.ladder[b])) -
                                              std::log(static_cast<double>(r.ladder[b - 1])));
        if (last < t.orthogonal_log && slope < t.orthogonal_slope)
            r.classification = KakutaniClass::orthogonal_evidence;
        else if (std::abs(last - prev) < t.equivalent_cauchy)
            r.classification = KakutaniClass::equivalent_evidence;
    } else if (last == 0.0) {
        r.classification = KakutaniClass::equivalent_evidence;
    }
    return r;
}

KakutaniReport kakutani_product(const AnalyticModel& f, const AnalyticModel& g, const SamplingPlan& plan,
                                const NoiseModel& p, std::vector<std::size_t> ladder, const KakutaniThresholds& t) {
    if (ladder.empty()) throw InvalidArgument("ladder must be nonempty", "ladder");
    const std::size_t n = std::min(plan.size(), *std::max_element(ladder.begin(), ladder.end()));
    std::vector<cplx> gaps(n);
    for (std::size_t k = 0; k < n; ++k) gaps[k] = f.evaluate(plan.points[k]) - g.evaluate(plan.points[k]);
    return kakutani_from_gaps(std::move(gaps), p, std::move(ladder), t);
}

}  // namespace hdisk
