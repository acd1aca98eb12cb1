#include "hdisk/sampling_design.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hdisk/errors.hpp"
#include "hdisk/kernels.hpp"
#include "hdisk/quadrature.hpp"

namespace hdisk {

std::string scheme_name(const SamplingScheme& s) {
    if (std::holds_alternative<DyadicScheme>(s)) return "dyadic";
    if (std::holds_alternative<RadialRayScheme>(s)) return "radial_ray";
    return "custom";
}

std::string to_string(TrendVerdict v) {
    switch (v) {
        case TrendVerdict::divergent: return "divergent-trend";
        case TrendVerdict::convergent: return "convergent-trend";
        case TrendVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

SamplingPlan SamplingPlan::prefix(std::size_t n) const {
    if (n > points.size()) throw InvalidArgument("prefix exceeds plan length", "prefix");
    SamplingPlan p;
    p.points.assign(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(n));
    p.target = target;
    p.scheme = n == points.size() ? scheme : SamplingScheme{CustomScheme{}};
    return p;
}

bool SamplingPlan::tail_condition() const noexcept {
    const std::size_t n = points.size();
    if (n < 4) return false;
    const std::size_t q = n / 4;
    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < q; ++i) head = std::max(head, points[i].depth());
    for (std::size_t i = n - q; i < n; ++i) tail = std::max(tail, points[i].depth());
    return tail < head;
}

namespace {

std::size_t bit_reverse(std::size_t x, int bits) {
    std::size_t r = 0;
    for (int b = 0; b < bits; ++b, x >>= 1) r = (r << 1) | (x & 1u);
    return r;
}

// Permutation of 0..n-1 visiting indices in van der Corput order.
std::vector<std::size_t> spread_order(std::size_t n) {
    int bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    std::vector<std::size_t> order;
    order.reserve(n);
    for (std::size_t i = 0; i < (std::size_t{1} << bits); ++i) {
        const std::size_t j = bit_reverse(i, bits);
        if (j < n) order.push_back(j);
    }
    return order;
}

}  // namespace

SamplingPlan generate_dyadic(const BoundarySet& e, int levels, int density_factor) {
    if (levels < 1 || levels > 24) throw InvalidArgument("levels must lie in [1, 24]", "plan.levels");
    if (density_factor < 1) throw InvalidArgument("density_factor must be positive", "plan.density_factor");
    const auto& pieces = e.segments();

    // size check before allocating anything
    double estimate = 0.0;
    for (int m = 1; m <= levels; ++m) {
        const double step = std::ldexp(1.0, -m) / density_factor;
        double per_level = 0.0;
        for (const auto& s : pieces) per_level += (s.length + 2.0 * step) / step + 2.0;
        estimate += std::min(per_level, std::ceil(two_pi / step));
    }
    if (estimate > static_cast<double>(max_plan_points))
        throw SizeLimitError("plan would exceed 1e7 points", "plan.levels");

    SamplingPlan plan;
    plan.target = e;
    plan.scheme = DyadicScheme{levels, density_factor};
    for (int m = 1; m <= levels; ++m) {
        const double radius = 1.0 - std::ldexp(1.0, -m);
        const double step = std::ldexp(1.0, -m) / density_factor;
        const auto count = static_cast<std::int64_t>(std::ceil(two_pi / step));
        std::vector<std::int64_t> ks;
        for (const auto& s : pieces) {
            const auto lo = static_cast<std::int64_t>(std::floor((s.start - step + pi) / step));
            const auto hi = static_cast<std::int64_t>(std::ceil((s.start + s.length + step + pi) / step));
            for (auto k = lo; k <= hi && k - lo < count; ++k) {
                const auto kk = ((k % count) + count) % count;
                const double theta = -pi + static_cast<double>(kk) * step;
                if (e.distance(theta) <= step) ks.push_back(kk);
            }
        }
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
        for (auto i : spread_order(ks.size()))
            plan.points.push_back(DiskPoint::polar(radius, -pi + static_cast<double>(ks[i]) * step));
    }
    return plan;
}

SamplingPlan generate_radial_ray(const BoundarySet& e, std::vector<double> anchor_angles, std::vector<double> radii) {
    if (anchor_angles.empty()) throw InvalidArgument("need at least one anchor angle", "plan.anchor_angles");
    for (double r : radii)
        if (!(r >= 0.0 && r < 1.0)) throw InvalidArgument("radii must lie in [0, 1)", "plan.radii");
    SamplingPlan plan;
    plan.target = e;
    for (double a : anchor_angles)
        for (double r : radii) plan.points.push_back(DiskPoint::polar(r, a));
    plan.scheme = RadialRayScheme{std::move(anchor_angles), std::move(radii)};
    return plan;
}

CoverageReport validate_coverage(const SamplingPlan& plan, int grid, bool parallel) {
    if (grid < 64) throw InvalidArgument("grid must be >= 64", "coverage.grid");
    CoverageReport r;
    r.grid = grid;
    if (const auto* d = std::get_if<DyadicScheme>(&plan.scheme)) r.threshold = std::max(1, d->levels / 2);
    r.angles.resize(grid);
    for (int j = 0; j < grid; ++j) r.angles[j] = -pi + two_pi * j / grid;
    r.counts = parallel ? kernels::stolz_counts_omp(r.angles, plan.points)
                        : kernels::stolz_counts_serial(r.angles, plan.points);
    r.in_target.resize(grid);
    std::size_t inside_low = 0, outside = 0, outside_low = 0;
    int min_count = -1;
    for (int j = 0; j < grid; ++j) {
        const bool in = plan.target.contains(r.angles[j]);
        r.in_target[j] = in;
        const bool low = r.counts[j] < r.threshold;
        if (in) {
            ++r.target_points;
            inside_low += low ? 1 : 0;
            min_count = min_count < 0 ? r.counts[j] : std::min(min_count, r.counts[j]);
        } else {
            ++outside;
            outside_low += low ? 1 : 0;
        }
    }
    r.min_count = std::max(min_count, 0);
    r.uncovered_fraction = r.target_points ? static_cast<double>(inside_low) / static_cast<double>(r.target_points) : 1.0;
    r.uncovered_fraction_outside = outside ? static_cast<double>(outside_low) / static_cast<double>(outside) : 1.0;
    return r;
}

namespace {

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

}  // namespace

BlaschkeSumReport blaschke_sum(const SamplingPlan& plan) {
    BlaschkeSumReport r;
    std::map<int, CompensatedSum> per_level;
    CompensatedSum total;
    for (const auto& z : plan.points) {
        const double d = z.depth();
        total.add(d);
        const int m = std::max(0, static_cast<int>(std::lround(-std::log2(d))));
        per_level[m].add(d);
    }
    r.total = total.value();
    std::vector<double> xs, ys;
    for (auto& [m, s] : per_level) {
        r.levels.push_back(m);
        r.level_sums.push_back(s.value());
        if (s.value() > 0.0) {
            xs.push_back(m);
            ys.push_back(std::log2(s.value()));
        }
    }
    if (xs.size() >= 3) {
        r.level_slope = least_squares_slope(xs, ys);
        if (r.level_slope > -0.1)
            r.verdict = TrendVerdict::divergent;
        else if (r.level_slope < -0.5)
            r.verdict = TrendVerdict::convergent;
    }
    return r;
}

double loglog_tail_slope(const std::vector<double>& series) {
    std::vector<double> xs, ys;
    const std::size_t n = series.size();
    for (std::size_t i = n / 2; i < n; ++i) {
        if (!(series[i] > 0.0)) continue;
        xs.push_back(std::log(static_cast<double>(i + 1)));
        ys.push_back(std::log(series[i]));
    }
    return least_squares_slope(xs, ys);
}

SeparationSeries separation_sum(const AnalyticModel& f, const AnalyticModel& g, const SamplingPlan& plan,
                                std::size_t prefix, const TrendThresholds& t) {
    if (prefix < 1 || prefix > plan.size()) throw InvalidArgument("prefix must lie in [1, plan length]", "prefix");
    SeparationSeries s;
    s.partial_sums.reserve(prefix);
    CompensatedSum acc;
    for (std::size_t k = 0; k < prefix; ++k) {
        acc.add(std::norm(f.evaluate(plan.points[k]) - g.evaluate(plan.points[k])));
        s.partial_sums.push_back(acc.value());
    }
    s.identically_zero = s.partial_sums.back() == 0.0;
    if (s.identically_zero) {
        s.verdict = TrendVerdict::convergent;
        return s;
    }
    s.slope = loglog_tail_slope(s.partial_sums);
    if (s.slope > t.divergent_slope)
        s.verdict = TrendVerdict::divergent;
    else if (s.slope < t.convergent_slope)
        s.verdict = TrendVerdict::convergent;
    return s;
}

}  // namespace hdisk
