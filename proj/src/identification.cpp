#include "hdisk/identification.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "hdisk/errors.hpp"
#include "hdisk/quadrature.hpp"

namespace hdisk {

namespace {

// Uniform on (0, 1) from the top 53 bits.
double unit_open(std::mt19937_64& g) { return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53; }

std::mt19937_64 keyed_generator(std::uint64_t seed, std::uint64_t n) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n >> 32)};
    return std::mt19937_64(seq);
}

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

cplx draw_noise(const NoiseModel& p, std::uint64_t seed, std::uint64_t n) {
    const auto& v = p.variant();
    if (std::holds_alternative<NoNoise>(v)) return {0.0, 0.0};
    auto gen = keyed_generator(seed, n);
    const double u1 = unit_open(gen);
    const double u2 = unit_open(gen);
    if (const auto* g = std::get_if<Gaussian2D>(&v)) {
        // Box-Muller, written out so draws do not depend on the standard library's distributions
        const double r = g->sigma * std::sqrt(-2.0 * std::log(u1));
        return std::polar(r, two_pi * u2);
    }
    if (const auto* u = std::get_if<UniformDisk>(&v)) return std::polar(u->radius * std::sqrt(u1), two_pi * u2);
    const auto& g = std::get<GridDensity>(v);
    double acc = 0.0;
    std::size_t cell = g.weights.size() - 1;
    for (std::size_t c = 0; c < g.weights.size(); ++c) {
        acc += g.weights[c];
        if (u1 < acc) {
            cell = c;
            break;
        }
    }
    const double u3 = unit_open(gen);
    const double half = 0.5 * static_cast<double>(g.n);
    const double x = (static_cast<double>(cell % g.n) - half + u2) * g.cell_width;
    const double y = (static_cast<double>(cell / g.n) - half + u3) * g.cell_width;
    return {x, y};
}

double noise_power(const NoiseModel& p) {
    const auto& v = p.variant();
    if (const auto* g = std::get_if<Gaussian2D>(&v)) return 2.0 * g->sigma * g->sigma;
    if (const auto* u = std::get_if<UniformDisk>(&v)) return 0.5 * u->radius * u->radius;
    if (const auto* g = std::get_if<GridDensity>(&v)) {
        const double half = 0.5 * (static_cast<double>(g->n) - 1.0);
        double s = 0.0;
        for (std::size_t i = 0; i < g->n; ++i)
            for (std::size_t j = 0; j < g->n; ++j) {
                const cplx c{(static_cast<double>(j) - half) * g->cell_width, (static_cast<double>(i) - half) * g->cell_width};
                s += g->weights[i * g->n + j] * (std::norm(c) + g->cell_width * g->cell_width / 6.0);
            }
        return s;
    }
    return 0.0;
}

ObservationSeries simulate_observations(const AnalyticModel& s, const SamplingPlan& plan, const NoiseModel& p,
                                        std::uint64_t seed) {
    if (plan.size() == 0) throw InvalidArgument("plan must be nonempty", "plan");
    ObservationSeries out;
    out.noise = p;
    out.seed = seed;
    out.observations.reserve(plan.size());
    for (std::size_t n = 0; n < plan.size(); ++n)
        out.observations.push_back({plan.points[n], s.evaluate(plan.points[n]) + draw_noise(p, seed, n)});
    return out;
}

void FitConfig::validate() const {
    if (degree < 0 || degree > 256) throw InvalidArgument("degree must lie in [0, 256]", "fit.degree");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be >= 0", "fit.lambda");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0, 1)", "fit.alpha");
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
        throw InvalidArgument("validation_fraction must lie in [0, 1)", "fit.validation_fraction");
}

namespace {

struct Solved {
    std::vector<cplx> c;
    double residual = 0.0;
    double penalty = 0.0;
};

Eigen::MatrixXcd vandermonde(const std::vector<const Observation*>& obs, int degree) {
    const auto n = static_cast<Eigen::Index>(obs.size());
    Eigen::MatrixXcd v(n, degree + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const cplx z = obs[static_cast<std::size_t>(i)]->z.value();
        cplx p{1.0, 0.0};
        for (int j = 0; j <= degree; ++j, p *= z) v(i, j) = p;
    }
    return v;
}

// The penalized problem as one least-squares system [V; sqrt(lambda W)] c ~ [X; 0], whose
// normal equations are (V^H V + lambda W) c = V^H X.
Solved solve(const std::vector<const Observation*>& obs, int degree, double lambda, double alpha) {
    if (lambda == 0.0 && static_cast<std::size_t>(degree) + 1 > obs.size())
        throw InvalidArgument("degree + 1 exceeds the number of observations", "fit.degree");
    const auto n = static_cast<Eigen::Index>(obs.size());
    const Eigen::Index d = degree + 1;
    std::vector<double> w(static_cast<std::size_t>(d));
    for (int j = 0; j <= degree; ++j) w[static_cast<std::size_t>(j)] = monomial_energy_weight(j, alpha);

    const Eigen::MatrixXcd v = vandermonde(obs, degree);
    Eigen::VectorXcd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = obs[static_cast<std::size_t>(i)]->x;

    Eigen::MatrixXcd a = v;
    Eigen::VectorXcd b = x;
    if (lambda > 0.0) {
        a.conservativeResize(n + d, d);
        b.conservativeResize(n + d);
        a.bottomRows(d).setZero();
        b.tail(d).setZero();
        for (Eigen::Index j = 0; j < d; ++j) a(n + j, j) = std::sqrt(lambda * w[static_cast<std::size_t>(j)]);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
    qr.setThreshold(1e-12);
    if (qr.rank() < d) throw RankDeficiency("design matrix is rank deficient (repeated or too few distinct points)");
    const Eigen::VectorXcd c = qr.solve(b);
    if (!c.allFinite()) throw NumericFailure("fit produced non-finite coefficients");

    Solved s;
    s.c.assign(c.data(), c.data() + d);
    s.residual = (v * c - x).norm();
    double pen = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) pen += std::norm(c(j)) * w[static_cast<std::size_t>(j)];
    s.penalty = lambda * pen;
    return s;
}

}  // namespace

FitResult fit_model(const ObservationSeries& obs, const FitConfig& cfg) {
    cfg.validate();
    if (obs.size() == 0) throw InvalidArgument("no observations", "observations");
    std::vector<const Observation*> all;
    for (const auto& o : obs.observations) all.push_back(&o);

    FitResult r;
    int degree = cfg.degree;
    if (cfg.validation_fraction > 0.0) {
        const auto stride = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(1.0 / cfg.validation_fraction)));
        std::vector<const Observation*> train, hold;
        for (std::size_t i = 0; i < all.size(); ++i) (i % stride == stride - 1 ? hold : train).push_back(all[i]);
        if (hold.empty() || train.empty()) throw InvalidArgument("too few observations for a holdout", "fit.validation_fraction");
        double best = std::numeric_limits<double>::infinity();
        for (int cand : candidate_degrees) {
            if (cfg.lambda == 0.0 && static_cast<std::size_t>(cand) + 1 > train.size()) continue;
            double score;
            try {
                const Solved s = solve(train, cand, cfg.lambda, cfg.alpha);
                CompensatedSum acc;
                for (const auto* o : hold) {
                    cplx m{0.0, 0.0};
                    for (auto it = s.c.rbegin(); it != s.c.rend(); ++it) m = m * o->z.value() + *it;
                    acc.add(std::norm(m - o->x));
                }
                score = std::sqrt(acc.value() / static_cast<double>(hold.size()));
            } catch (const RankDeficiency&) {
                continue;
            }
            r.validation_curve.emplace_back(cand, score);
            if (score < best) {
                best = score;
                degree = cand;
            }
        }
        if (r.validation_curve.empty()) throw InvalidArgument("no candidate degree fits the training split", "fit.validation_fraction");
    }
    const Solved s = solve(all, degree, cfg.lambda, cfg.alpha);
    r.coefficients = s.c;
    r.fitted = AnalyticModel::taylor(s.c);
    r.degree = degree;
    r.residual_norm = s.residual;
    r.penalty = s.penalty;
    return r;
}

std::vector<cplx> evaluation_grid() {
    std::vector<cplx> g;
    g.reserve(512);
    for (int k = 1; k <= 8; ++k)
        for (int j = 0; j < 64; ++j) g.push_back(std::polar(0.7 * k / 8.0, -pi + two_pi * j / 64.0));
    return g;
}

std::vector<cplx> boundary_grid() {
    std::vector<cplx> g;
    g.reserve(256);
    for (int j = 0; j < 256; ++j) g.push_back(std::polar(0.95, -pi + two_pi * j / 256.0));
    return g;
}

double sup_error(const AnalyticModel& fitted, const AnalyticModel& truth, const std::vector<cplx>& grid) {
    double e = 0.0;
    for (const auto& z : grid) e = std::max(e, std::abs(fitted.evaluate_at(z) - truth.evaluate_at(z)));
    return e;
}

ExperimentReport consistency_experiment(const AnalyticModel& s, const SamplingPlan& plan, const NoiseModel& p,
                                        const FitConfig& cfg, std::vector<std::size_t> ladder,
                                        std::vector<std::uint64_t> seeds, bool parallel) {
    cfg.validate();
    if (ladder.empty()) throw InvalidArgument("ladder must be nonempty", "ladder");
    for (std::size_t i = 0; i < ladder.size(); ++i)
        if (ladder[i] == 0 || (i > 0 && ladder[i] <= ladder[i - 1]))
            throw InvalidArgument("ladder must be positive and increasing", "ladder");
    if (ladder.back() > plan.size()) throw InvalidArgument("ladder exceeds the plan length", "ladder");
    if (seeds.empty()) throw InvalidArgument("seeds must be nonempty", "seeds");

    ExperimentReport r;
    r.ladder = std::move(ladder);
    r.seeds = std::move(seeds);
    const std::size_t ns = r.seeds.size();
    r.cells.resize(r.ladder.size() * ns);
    const auto grid = evaluation_grid();
    const auto outer = boundary_grid();
    const auto truth = s.taylor_coefficients(256);

    auto run_cell = [&](std::size_t idx) {
        ExperimentCell& c = r.cells[idx];
        c.n = r.ladder[idx / ns];
        c.seed = r.seeds[idx % ns];
        try {
            const auto obs = simulate_observations(s, plan.prefix(c.n), p, c.seed);
            const auto fit = fit_model(obs, cfg);
            c.sup_error = sup_error(fit.fitted, s, grid);
            c.boundary_sup_error = sup_error(fit.fitted, s, outer);
            double ce = 0.0;
            for (std::size_t j = 0; j < fit.coefficients.size(); ++j) ce += std::norm(fit.coefficients[j] - truth[j]);
            c.coefficient_error = std::sqrt(ce);
            c.degree = fit.degree;
            c.ok = true;
        } catch (const std::exception& e) {
            c.message = e.what();
        }
    };
    const auto cells = static_cast<std::ptrdiff_t>(r.cells.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < cells; ++i) run_cell(static_cast<std::size_t>(i));
    } else {
        for (std::ptrdiff_t i = 0; i < cells; ++i) run_cell(static_cast<std::size_t>(i));
    }

    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < r.ladder.size(); ++k) {
        std::vector<double> sup, coef, edge;
        for (std::size_t j = 0; j < ns; ++j) {
            const auto& c = r.cells[k * ns + j];
            if (!c.ok) continue;
            sup.push_back(c.sup_error);
            coef.push_back(c.coefficient_error);
            edge.push_back(c.boundary_sup_error);
        }
        r.median_sup_error.push_back(median(sup));
        r.median_coefficient_error.push_back(median(coef));
        r.median_boundary_sup_error.push_back(median(edge));
        if (r.median_sup_error.back() > 0.0) {
            xs.push_back(std::log(static_cast<double>(r.ladder[k])));
            ys.push_back(std::log(r.median_sup_error.back()));
        }
    }
    if (xs.size() >= 2) {
        const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        r.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    }
    return r;
}

ResidualReport residual_separation(const AnalyticModel& f, const AnalyticModel& g, const SamplingPlan& plan,
                                   const NoiseModel& p, std::uint64_t seed, double threshold) {
    const auto obs = simulate_observations(f, plan, p, seed);
    ResidualReport r;
    r.n = obs.size();
    CompensatedSum a, b;
    for (const auto& o : obs.observations) {
        a.add(std::norm(o.x - f.evaluate(o.z)));
        b.add(std::norm(o.x - g.evaluate(o.z)));
    }
    r.rss_true = a.value();
    r.rss_alternative = b.value();
    const double scale = static_cast<double>(r.n) * noise_power(p);
    r.relative_gap = scale > 0.0 ? std::abs(r.rss_alternative - r.rss_true) / scale
                                 : (r.rss_alternative == r.rss_true ? 0.0 : std::numeric_limits<double>::infinity());
    r.separating = r.relative_gap > threshold;
    r.separation = separation_sum(f, g, plan, plan.size()).verdict;
    std::vector<std::size_t> ladder;
    if (r.n >= 2) ladder.push_back(r.n / 2);
    ladder.push_back(r.n);
    r.kakutani = kakutani_product(f, g, plan, p, ladder).classification;
    return r;
}

AnalyticModel perturb_at_one(const AnalyticModel& f, double scale) {
    const std::vector<cplx> q{cplx{scale, 0.0}, cplx{-2.0 * scale, 0.0}, cplx{scale, 0.0}};
    auto add = [](std::vector<cplx> a, const std::vector<cplx>& b) {
        if (a.size() < b.size()) a.resize(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
        return a;
    };
    if (const auto* t = f.as_taylor()) return AnalyticModel::taylor(add(t->coefficients, q));
    if (const auto* r = f.as_rational()) {
        std::vector<cplx> qd(q.size() + r->denominator.size() - 1);
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = 0; j < r->denominator.size(); ++j) qd[i + j] += q[i] * r->denominator[j];
        return AnalyticModel::rational(add(r->numerator, qd), r->denominator);
    }
    throw InvalidArgument("perturbation needs a Taylor or rational model", "model.type");
}

SamplingPlan single_ray_plan(std::size_t count) {
    std::vector<double> radii(count);
    for (std::size_t n = 0; n < count; ++n) radii[n] = 1.0 - std::exp2(-(4.0 + static_cast<double>(n) / 16.0));
    return generate_radial_ray(BoundarySet::full_circle(), {0.0}, std::move(radii));
}

}  // namespace hdisk
