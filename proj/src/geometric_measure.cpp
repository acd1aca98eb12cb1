#include "hdisk/geometric_measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>

#include "hdisk/errors.hpp"
#include "hdisk/kernels.hpp"
#include "hdisk/quadrature.hpp"

namespace hdisk {

std::string to_string(Admissibility a) {
    switch (a) {
        case Admissibility::yes: return "yes";
        case Admissibility::no: return "no";
        case Admissibility::unknown: return "unknown";
    }
    return "unknown";
}

std::string to_string(ContentMode m) {
    switch (m) {
        case ContentMode::exact_dp: return "exact_dp";
        case ContentMode::greedy: return "greedy";
        case ContentMode::brute_force: return "brute_force";
    }
    return "exact_dp";
}

std::string to_string(KernelMode m) { return m == KernelMode::angular ? "angular" : "chordal"; }

// --- gauges ------------------------------------------------------------------------------

GaugeFunction GaugeFunction::power(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be positive", "gauge.beta");
    GaugeFunction h;
    h.kind_ = Kind::power;
    h.beta_ = beta;
    h.admissible_ = probe_admissibility(h);
    return h;
}

GaugeFunction GaugeFunction::tlog() {
    GaugeFunction h;
    h.kind_ = Kind::tlog;
    h.admissible_ = probe_admissibility(h);
    return h;
}

GaugeFunction GaugeFunction::custom(std::vector<std::pair<double, double>> table) {
    if (table.empty()) throw InvalidArgument("table must be nonempty", "gauge.table");
    double prev_t = 0.0, prev_h = 0.0;
    for (const auto& [t, v] : table) {
        if (!(t > prev_t) || !std::isfinite(t)) throw InvalidArgument("t must be positive and increasing", "gauge.table");
        if (!(v >= prev_h) || !std::isfinite(v))
            throw InvalidArgument("h must be nonnegative and nondecreasing", "gauge.table");
        prev_t = t;
        prev_h = v;
    }
    GaugeFunction h;
    h.kind_ = Kind::custom;
    h.table_ = std::move(table);
    h.admissible_ = probe_admissibility(h);
    return h;
}

double GaugeFunction::operator()(double t) const noexcept {
    if (!(t > 0.0)) return 0.0;
    switch (kind_) {
        case Kind::power: return std::pow(t, beta_);
        case Kind::tlog: {
            constexpr double knee = 1.0 / std::numbers::e;
            return t < knee ? t * std::log(1.0 / t) : knee;
        }
        case Kind::custom: {
            const auto& first = table_.front();
            if (t <= first.first) return first.second * t / first.first;
            auto it = std::lower_bound(table_.begin(), table_.end(), t,
                                       [](const auto& row, double x) { return row.first < x; });
            if (it == table_.end()) return table_.back().second;
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            return lo.second + (hi.second - lo.second) * (t - lo.first) / (hi.first - lo.first);
        }
    }
    return 0.0;
}

std::string GaugeFunction::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::power: os << "power(" << beta_ << ")"; break;
        case Kind::tlog: os << "tlog"; break;
        case Kind::custom: os << "custom(" << table_.size() << " rows)"; break;
    }
    return os.str();
}

std::vector<double> admissibility_probe(const GaugeFunction& h) {
    std::vector<double> q;
    q.reserve(40);
    for (int j = 1; j <= 40; ++j) {
        const double t = std::ldexp(1.0, -j);
        q.push_back(h(t) / (t * j * std::numbers::ln2));
    }
    return q;
}

Admissibility probe_admissibility(const GaugeFunction& h) {
    const auto q = admissibility_probe(h);
    constexpr int tail_begin = 19;  // j = 20
    bool decreasing = true, nondecreasing = true;
    for (int i = tail_begin; i + 1 < static_cast<int>(q.size()); ++i) {
        if (q[i + 1] > q[i] * (1.0 + 1e-12)) decreasing = false;
        if (q[i + 1] < q[i] * (1.0 - 1e-12)) nondecreasing = false;
    }
    if (q.back() < 1e-2 && decreasing) return Admissibility::yes;
    if (decreasing && !nondecreasing && q.back() > 0.0) {
        // least-squares slope of log q_j against log j on the tail
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (int i = tail_begin; i < static_cast<int>(q.size()); ++i, ++n) {
            const double x = std::log(i + 1.0), y = std::log(q[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        if (slope <= -0.9) return Admissibility::yes;
        return Admissibility::unknown;
    }
    if (nondecreasing) return Admissibility::no;
    return Admissibility::unknown;
}

// --- boundary sets -----------------------------------------------------------------------

namespace {

std::vector<Segment> normalize(std::vector<Segment> raw) {
    for (auto& s : raw) {
        if (s.length >= two_pi) return {Segment{-pi, two_pi}};
        s.start = wrap_angle(s.start);
    }
    std::sort(raw.begin(), raw.end(), [](const Segment& a, const Segment& b) {
        return a.start < b.start || (a.start == b.start && a.length > b.length);
    });
    std::vector<Segment> out;
    for (const auto& s : raw) {
        if (!out.empty() && s.start <= out.back().start + out.back().length) {
            auto& b = out.back();
            b.length = std::max(b.length, s.start + s.length - b.start);
        } else {
            out.push_back(s);
        }
    }
    // pieces running past +pi may reach the first pieces
    while (out.size() > 1 && out.back().start + out.back().length >= out.front().start + two_pi) {
        auto& last = out.back();
        const auto& first = out.front();
        last.length = std::max(last.length, first.start + first.length + two_pi - last.start);
        out.erase(out.begin());
    }
    if (out.size() == 1 && out.front().length >= two_pi) return {Segment{-pi, two_pi}};
    return out;
}

double circular_distance(double a, double b) noexcept {
    const double d = std::abs(wrap_angle(a - b));
    return std::min(d, two_pi - d);
}

bool segment_contains(const Segment& s, double theta) noexcept {
    if (s.length >= two_pi) return true;
    double offset = wrap_angle(theta) - s.start;
    if (offset < 0.0) offset += two_pi;
    return offset <= s.length;
}

}  // namespace

BoundarySet::BoundarySet(Variant v) : v_(std::move(v)) {
    std::vector<Segment> raw;
    if (const auto* u = std::get_if<ArcUnion>(&v_)) {
        for (const auto& a : u->arcs) raw.push_back({a.start(), a.length()});
    } else if (const auto* c = std::get_if<CantorSet>(&v_)) {
        if (!(c->ratio > 0.0 && c->ratio < 0.5)) throw InvalidArgument("ratio must lie in (0, 1/2)", "set.ratio");
        if (c->depth < 0 || c->depth > 20) throw InvalidArgument("depth must lie in [0, 20]", "set.depth");
        std::vector<Segment> level{{c->base.start(), c->base.length()}};
        for (int d = 0; d < c->depth; ++d) {
            std::vector<Segment> next;
            next.reserve(level.size() * 2);
            for (const auto& s : level) {
                const double piece = c->ratio * s.length;
                next.push_back({s.start, piece});
                next.push_back({s.start + s.length - piece, piece});
            }
            level.swap(next);
        }
        raw = std::move(level);
    } else {
        for (const auto& p : std::get<PointSet>(v_).points) raw.push_back({p.theta(), 0.0});
    }
    segments_ = normalize(std::move(raw));
}

BoundarySet BoundarySet::full_circle() { return arcs({Arc(-pi, two_pi)}); }

double BoundarySet::total_length() const noexcept {
    double s = 0.0;
    for (const auto& seg : segments_) s += seg.length;
    return s;
}

bool BoundarySet::contains(double theta) const noexcept {
    return std::any_of(segments_.begin(), segments_.end(), [&](const Segment& s) { return segment_contains(s, theta); });
}

double BoundarySet::distance(double theta) const noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : segments_) {
        if (segment_contains(s, theta)) return 0.0;
        best = std::min({best, circular_distance(theta, s.start), circular_distance(theta, s.start + s.length)});
    }
    return best;
}

// --- Hausdorff content -------------------------------------------------------------------

double run_hull(const std::vector<Segment>& pieces, const Run& run) noexcept {
    const std::size_t k = pieces.size();
    const std::size_t last = run.first + run.count - 1;
    const auto& a = pieces[run.first];
    const auto& b = pieces[last % k];
    const double end = b.start + b.length + (last >= k ? two_pi : 0.0);
    return std::min(end - a.start, two_pi);
}

double cover_cost(const std::vector<Segment>& pieces, std::vector<Run> cover, const GaugeFunction& h) {
    std::sort(cover.begin(), cover.end(), [](const Run& a, const Run& b) { return a.first < b.first; });
    double total = 0.0;
    for (const auto& r : cover) total += h(run_hull(pieces, r));
    return total;
}

namespace {

ContentResult finish(const std::vector<Segment>& pieces, std::vector<Run> cover, const GaugeFunction& h) {
    ContentResult r;
    r.value = cover_cost(pieces, cover, h);
    std::sort(cover.begin(), cover.end(), [](const Run& a, const Run& b) { return a.first < b.first; });
    r.cover = std::move(cover);
    return r;
}

ContentResult content_exact(const std::vector<Segment>& pieces, const GaugeFunction& h) {
    const std::size_t k = pieces.size();
    kernels::PartitionProblem problem(pieces, h);
    std::size_t widest = 0;
    for (std::size_t i = 1; i < k; ++i)
        if (problem.gap_before(i) > problem.gap_before(widest)) widest = i;
    const auto upper = kernels::linear_partition(problem, widest);
    // A gap whose cheapest spanning run (its two neighbours) already costs more than a known
    // cover is cut in every optimal cover, so one linear pass from it is exact.
    for (std::size_t c = 0; c < k; ++c) {
        const double spanning = problem.cost(c + k - 1, c + k);
        if (spanning > upper.value * (1.0 + 1e-12)) return finish(pieces, kernels::linear_partition(problem, c).runs, h);
    }
    return finish(pieces, kernels::circular_partition_omp(problem).runs, h);
}

ContentResult content_greedy(const std::vector<Segment>& pieces, const GaugeFunction& h) {
    const std::size_t k = pieces.size();
    std::vector<Run> runs(k);
    for (std::size_t i = 0; i < k; ++i) runs[i] = Run{i, 1};
    auto merged = [&](const Run& a, const Run& b) { return Run{a.first, a.count + b.count}; };
    auto saving = [&](const Run& a, const Run& b) {
        return h(run_hull(pieces, a)) + h(run_hull(pieces, b)) - h(run_hull(pieces, merged(a, b)));
    };
    while (runs.size() > 1) {
        double best = 0.0;
        std::size_t at = runs.size();
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const double s = saving(runs[i], runs[(i + 1) % runs.size()]);
            if (s > best) {
                best = s;
                at = i;
            }
        }
        if (at == runs.size()) break;
        const std::size_t next = (at + 1) % runs.size();
        runs[at] = merged(runs[at], runs[next]);
        runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(next));
    }
    for (auto& r : runs) r.first %= k;
    return finish(pieces, std::move(runs), h);
}

ContentResult content_brute_force(const std::vector<Segment>& pieces, const GaugeFunction& h) {
    const std::size_t k = pieces.size();
    if (k > max_brute_force_pieces) throw SizeLimitError("brute force needs at most 10 pieces", "set");
    ContentResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        std::vector<std::size_t> cuts;
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (1u << i)) cuts.push_back(i);
        std::vector<Run> cover;
        for (std::size_t t = 0; t < cuts.size(); ++t) {
            const std::size_t next = cuts[(t + 1) % cuts.size()];
            std::size_t count = (next + k - cuts[t]) % k;
            if (count == 0) count = k;
            cover.push_back(Run{cuts[t], count});
        }
        const double v = cover_cost(pieces, cover, h);
        if (v < best.value) {
            best.value = v;
            best.cover = std::move(cover);
        }
    }
    return best;
}

}  // namespace

ContentResult hausdorff_content_cover(const BoundarySet& e, const GaugeFunction& h, ContentMode mode) {
    const auto& pieces = e.segments();
    if (pieces.size() > max_content_pieces) throw SizeLimitError("at most 2^14 pieces are supported", "set");
    if (pieces.empty()) return {};
    if (pieces.size() == 1) return finish(pieces, {Run{0, 1}}, h);
    switch (mode) {
        case ContentMode::exact_dp: return content_exact(pieces, h);
        case ContentMode::greedy: return content_greedy(pieces, h);
        case ContentMode::brute_force: return content_brute_force(pieces, h);
    }
    return {};
}

double hausdorff_content(const BoundarySet& e, const GaugeFunction& h, ContentMode mode) {
    return hausdorff_content_cover(e, h, mode).value;
}

Theorem1Certificate certify_theorem1_set(const BoundarySet& e, const GaugeFunction& h, double threshold) {
    Theorem1Certificate c;
    c.admissible = h.admissible();
    c.threshold = threshold;
    c.pieces = e.segments().size();
    c.content = hausdorff_content(e, h, ContentMode::exact_dp);
    c.pass = c.content > threshold;
    c.hypotheses_met = c.pass && c.admissible != Admissibility::no;
    return c;
}

// --- capacity ----------------------------------------------------------------------------

namespace {

double periodic_distance(double u) noexcept {
    double d = std::fmod(std::abs(u), two_pi);
    return std::min(d, two_pi - d);
}

double kernel_value(double u, double alpha, KernelMode mode) noexcept {
    const double d = periodic_distance(u);
    if (mode == KernelMode::angular) return std::pow(d, -alpha);
    return std::pow(2.0 * std::sin(0.5 * d), -alpha);
}

const GaussRule& hat_rule() {
    static const GaussRule rule = gauss_legendre(8);
    return rule;
}

}  // namespace

double cell_averaged_kernel(double separation, double width, double alpha, KernelMode mode) {
    separation = periodic_distance(separation);
    if (separation >= 4.0 * width) {
        // smooth over the hat: (1/w^2) int_0^w (w - s) [k(D + s) + k(D - s)] ds
        const double v = integrate(hat_rule(), 0.0, width, [&](double s) {
            return (width - s) * (kernel_value(separation + s, alpha, mode) + kernel_value(separation - s, alpha, mode));
        });
        return v / (width * width);
    }
    // |u|^-alpha convolved with the hat is the second difference of G(u) = |u|^{2-a}/((1-a)(2-a))
    auto g2 = [&](double u) { return std::pow(std::abs(u), 2.0 - alpha) / ((1.0 - alpha) * (2.0 - alpha)); };
    const double w = width, d = separation;
    double v = (g2(d + w) - 2.0 * g2(d) + g2(d - w)) / (w * w);
    if (mode == KernelMode::chordal && d > 0.0) {
        const double half = 0.5 * d;
        v *= std::pow(std::sin(half) / half, -alpha);
    }
    return v;
}

CapacityGrid capacity_grid(const BoundarySet& e, int grid_points) {
    if (grid_points < 32) throw InvalidArgument("grid_points must be >= 32", "capacity.grid_points");
    const auto& pieces = e.segments();
    if (pieces.empty()) throw InvalidArgument("set is empty", "set");
    const double total = e.total_length();
    std::int64_t cells = grid_points;
    while (total * static_cast<double>(cells) < 32.0 * two_pi && cells < (std::int64_t{1} << 26)) cells *= 2;
    const double w = two_pi / static_cast<double>(cells);
    std::vector<std::int64_t> picked;
    for (const auto& s : pieces) {
        // centers -pi + (k + 1/2) w inside [start, start + length]
        const auto k0 = static_cast<std::int64_t>(std::ceil((s.start + pi) / w - 0.5));
        const auto k1 = static_cast<std::int64_t>(std::floor((s.start + s.length + pi) / w - 0.5));
        for (auto k = k0; k <= k1; ++k) picked.push_back(((k % cells) + cells) % cells);
    }
    if (picked.empty())
        for (const auto& s : pieces) {
            const auto k = static_cast<std::int64_t>(std::floor((s.start + 0.5 * s.length + pi) / w));
            picked.push_back(((k % cells) + cells) % cells);
        }
    std::sort(picked.begin(), picked.end());
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
    if (picked.size() > 8192) throw SizeLimitError("capacity grid exceeds 8192 cells", "capacity.grid_points");
    CapacityGrid grid;
    grid.cell_width = w;
    for (auto k : picked) grid.centers.push_back(-pi + (static_cast<double>(k) + 0.5) * w);
    return grid;
}

CapacityResult alpha_capacity(const BoundarySet& e, double alpha, int grid_points, KernelMode mode,
                              const CapacityOptions& opt) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)", "capacity.alpha");
    const auto grid = capacity_grid(e, grid_points);
    const std::size_t m = grid.centers.size();
    const auto kmat = opt.parallel ? kernels::energy_matrix_omp(grid.centers, grid.cell_width, alpha, mode)
                                   : kernels::energy_matrix_serial(grid.centers, grid.cell_width, alpha, mode);
    auto col = [&](std::size_t j) { return kmat.data() + j * m; };  // symmetric

    std::vector<double> mu(m, 1.0 / static_cast<double>(m));
    std::vector<double> kmu(m, 0.0);
    auto refresh = [&] {
        for (std::size_t i = 0; i < m; ++i) {
            CompensatedSum s;
            for (std::size_t j = 0; j < m; ++j) s.add(kmat[i * m + j] * mu[j]);
            kmu[i] = s.value();
        }
    };
    refresh();

    CapacityResult r;
    r.cell_width = grid.cell_width;
    r.cell_centers = grid.centers;
    int it = 0;
    for (;; ++it) {
        double energy = 0.0;
        for (std::size_t i = 0; i < m; ++i) energy += mu[i] * kmu[i];
        std::size_t toward = 0, away = m;
        for (std::size_t i = 1; i < m; ++i)
            if (kmu[i] < kmu[toward]) toward = i;
        for (std::size_t i = 0; i < m; ++i)
            if (mu[i] > 0.0 && (away == m || kmu[i] > kmu[away])) away = i;
        const double gap = 2.0 * (energy - kmu[toward]);
        r.energy = energy;
        r.gap = gap;
        if (gap <= opt.gap_tolerance * energy || toward == away) break;
        if (it >= opt.max_iterations) {
            r.iterations = it;
            throw NonConvergence("capacity: Frank-Wolfe iteration cap reached, gap " + std::to_string(gap), gap);
        }
        // pairwise step mass from `away` to `toward`, exact line search on the quadratic
        const double slope = kmu[toward] - kmu[away];
        const double curvature = kmat[toward * m + toward] - 2.0 * kmat[toward * m + away] + kmat[away * m + away];
        double step = curvature > 0.0 ? -slope / curvature : mu[away];
        step = std::clamp(step, 0.0, mu[away]);
        if (step == mu[away]) {
            mu[toward] += mu[away];
            mu[away] = 0.0;
        } else {
            mu[toward] += step;
            mu[away] -= step;
        }
        const double* ct = col(toward);
        const double* ca = col(away);
        for (std::size_t i = 0; i < m; ++i) kmu[i] += step * (ct[i] - ca[i]);
        if (it % 512 == 511) refresh();
    }
    r.iterations = it;
    r.weights = std::move(mu);
    r.capacity = 1.0 / r.energy;
    return r;
}

}  // namespace hdisk
