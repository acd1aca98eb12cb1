#include "hdisk/function_models.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hdisk/errors.hpp"
#include "hdisk/quadrature.hpp"

namespace hdisk {

namespace {

struct HornerValue {
    cplx value;
    cplx derivative;
};

HornerValue horner(const std::vector<cplx>& c, cplx z) noexcept {
    cplx p{0.0, 0.0}, dp{0.0, 0.0};
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
    return {p, dp};
}

std::vector<cplx> trimmed(std::vector<cplx> c) {
    while (!c.empty() && c.back() == cplx{0.0, 0.0}) c.pop_back();
    return c;
}

void require_finite(const std::vector<cplx>& c, const char* field) {
    for (const auto& x : c)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw InvalidArgument("coefficients must be finite", field);
}

}  // namespace

std::vector<AnalyticModel> stock_family() {
    using c = cplx;
    return {
        AnalyticModel::taylor({c{0, 0}, c{1, 0}}),
        AnalyticModel::taylor({c{1, 0}, c{0, 0}, c{0.5, 0}, c{0, 0}, c{0, 0}, c{0, 0}, c{-0.2, 0}}),
        AnalyticModel::taylor({c{0.3, 0}, c{0, 0}, c{0, 0}, c{-0.4, 0}}),
        AnalyticModel::rational({c{1, 0}}, {c{1, 0}, c{-0.5, 0}}),
        AnalyticModel::rational({c{0.2, 0}, c{1, 0}}, {c{1, 0}, c{0, 0}, c{0.3, 0}}),
        AnalyticModel::blaschke(ZeroSequence{{DiskPoint(0.5, 0.0), DiskPoint(0.0, -0.3)}}),
        AnalyticModel::blaschke(ZeroSequence{{DiskPoint(std::polar(0.7, 1.0))}}, std::polar(1.0, 0.4)),
    };
}

std::vector<cplx> polynomial_roots(const std::vector<cplx>& coefficients) {
    const auto c = trimmed(coefficients);
    if (c.size() <= 1) return {};
    const auto degree = static_cast<Eigen::Index>(c.size() - 1);
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
    for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < degree; ++i) companion(i, degree - 1) = -c[i] / c.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw NumericFailure("companion eigenvalue solve failed");
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

AnalyticModel AnalyticModel::taylor(std::vector<cplx> coefficients) {
    require_finite(coefficients, "coefficients");
    if (coefficients.empty()) coefficients.push_back({0.0, 0.0});
    return AnalyticModel(TaylorPolynomial{std::move(coefficients)});
}

AnalyticModel AnalyticModel::rational(std::vector<cplx> numerator, std::vector<cplx> denominator,
                                      double pole_margin) {
    require_finite(numerator, "numerator");
    require_finite(denominator, "denominator");
    denominator = trimmed(std::move(denominator));
    if (denominator.empty()) throw InvalidArgument("denominator is identically zero", "denominator");
    if (!(pole_margin >= 0.0)) throw InvalidArgument("pole margin must be nonnegative", "pole_margin");
    for (const auto& root : polynomial_roots(denominator))
        if (std::abs(root) <= 1.0 + pole_margin)
            throw InvalidArgument("denominator has a root inside the closed disk (|root| = " +
                                      std::to_string(std::abs(root)) + ")",
                                  "denominator");
    if (numerator.empty()) numerator.push_back({0.0, 0.0});
    return AnalyticModel(RationalFunction{std::move(numerator), std::move(denominator)});
}

AnalyticModel AnalyticModel::blaschke(ZeroSequence zeros, cplx unimodular_constant) {
    if (std::abs(std::abs(unimodular_constant) - 1.0) > 1e-12)
        throw InvalidArgument("constant must have modulus 1", "constant");
    return AnalyticModel(FiniteBlaschke{std::move(zeros), unimodular_constant});
}

ModelKind AnalyticModel::kind() const noexcept {
    return static_cast<ModelKind>(v_.index());
}

cplx AnalyticModel::evaluate_at(cplx z) const noexcept {
    if (const auto* t = as_taylor()) return horner(t->coefficients, z).value;
    if (const auto* r = as_rational()) return horner(r->numerator, z).value / horner(r->denominator, z).value;
    const auto& b = *as_blaschke();
    return b.unimodular_constant * blaschke_product(std::span<const DiskPoint>(b.zeros.zeros), z);
}

cplx AnalyticModel::derivative_at(cplx z) const noexcept {
    if (const auto* t = as_taylor()) return horner(t->coefficients, z).derivative;
    if (const auto* r = as_rational()) {
        const auto n = horner(r->numerator, z);
        const auto d = horner(r->denominator, z);
        return (n.derivative * d.value - n.value * d.derivative) / (d.value * d.value);
    }
    const auto& b = *as_blaschke();
    const auto& zs = b.zeros.zeros;
    const std::size_t k = zs.size();
    std::vector<cplx> factor(k), dfactor(k);
    for (std::size_t i = 0; i < k; ++i) {
        const cplx a = zs[i].value();
        const double m = std::abs(a);
        if (m == 0.0) {
            factor[i] = z;
            dfactor[i] = 1.0;
            continue;
        }
        const cplx den = 1.0 - std::conj(a) * z;
        factor[i] = (m / a) * (a - z) / den;
        dfactor[i] = (m / a) * (m * m - 1.0) / (den * den);
    }
    // product rule with prefix and suffix products
    std::vector<cplx> suffix(k + 1, cplx{1.0, 0.0});
    for (std::size_t i = k; i-- > 0;) suffix[i] = suffix[i + 1] * factor[i];
    cplx prefix{1.0, 0.0}, sum{0.0, 0.0};
    for (std::size_t i = 0; i < k; ++i) {
        sum += prefix * dfactor[i] * suffix[i + 1];
        prefix *= factor[i];
    }
    return b.unimodular_constant * sum;
}

std::vector<cplx> AnalyticModel::taylor_coefficients(int degree) const {
    if (degree < 0) throw InvalidArgument("degree must be nonnegative", "degree");
    const auto n = static_cast<std::size_t>(degree) + 1;
    std::vector<cplx> out(n, cplx{0.0, 0.0});
    if (const auto* t = as_taylor()) {
        std::copy_n(t->coefficients.begin(), std::min(n, t->coefficients.size()), out.begin());
        return out;
    }
    if (const auto* r = as_rational()) {
        const auto& num = r->numerator;
        const auto& den = r->denominator;
        for (std::size_t k = 0; k < n; ++k) {
            cplx acc = k < num.size() ? num[k] : cplx{0.0, 0.0};
            for (std::size_t i = 1; i <= k && i < den.size(); ++i) acc -= den[i] * out[k - i];
            out[k] = acc / den[0];
        }
        return out;
    }
    const auto& b = *as_blaschke();
    out[0] = b.unimodular_constant;
    std::vector<cplx> factor(n), next(n);
    for (const auto& zero : b.zeros.zeros) {
        const cplx a = zero.value();
        const double m = std::abs(a);
        std::fill(factor.begin(), factor.end(), cplx{0.0, 0.0});
        if (m == 0.0) {
            if (n > 1) factor[1] = 1.0;
        } else {
            // (|a|/a)(a - z) sum_k (conj(a) z)^k
            const cplx u = m / a;
            const cplx ab = std::conj(a);
            factor[0] = m;
            cplx power{1.0, 0.0};  // conj(a)^(k-1)
            for (std::size_t k = 1; k < n; ++k) {
                factor[k] = u * (a * power * ab - power);
                power *= ab;
            }
        }
        std::fill(next.begin(), next.end(), cplx{0.0, 0.0});
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; i + j < n; ++j) next[i + j] += out[i] * factor[j];
        out.swap(next);
    }
    return out;
}

std::string AnalyticModel::describe() const {
    std::ostringstream os;
    os.precision(6);
    switch (kind()) {
        case ModelKind::taylor: os << "taylor(degree " << as_taylor()->coefficients.size() - 1 << ")"; break;
        case ModelKind::rational:
            os << "rational(" << as_rational()->numerator.size() - 1 << "/" << as_rational()->denominator.size() - 1
               << ")";
            break;
        case ModelKind::blaschke: os << "blaschke(" << as_blaschke()->zeros.size() << " zeros)"; break;
    }
    return os.str();
}

// --- boundary functions ------------------------------------------------------------------

BoundaryFunction::BoundaryFunction(std::vector<cplx> samples) : samples_(std::move(samples)) {
    const auto n = samples_.size();
    if (n < 16 || (n & (n - 1)) != 0)
        throw InvalidArgument("sample count must be a power of two >= 16", "samples");
    for (const auto& s : samples_)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw InvalidArgument("samples must be finite", "samples");
}

BoundaryFunction BoundaryFunction::trace(const AnalyticModel& m, std::size_t n) {
    return sample([&](double t) { return m.evaluate_at(std::polar(1.0, t)); }, n);
}

double BoundaryFunction::angle(std::size_t j, std::size_t n) noexcept {
    return -pi + two_pi * static_cast<double>(j) / static_cast<double>(n);
}

BoundaryFunction BoundaryFunction::coarsen() const {
    std::vector<cplx> s(samples_.size() / 2);
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = samples_[2 * j];
    return BoundaryFunction(std::move(s));
}

void QuadratureSpec::validate() const {
    if (radial_nodes < 8) throw InvalidArgument("must be >= 8", "quadrature.radial_nodes");
    if (angular_nodes < 8) throw InvalidArgument("must be >= 8", "quadrature.angular_nodes");
    if (singularity_refinement_depth < 0 || singularity_refinement_depth > 20)
        throw InvalidArgument("must lie in [0, 20]", "quadrature.singularity_refinement_depth");
}

// --- energies ----------------------------------------------------------------------------

double monomial_energy_weight(int j, double alpha) {
    if (j <= 0) return 0.0;
    return two_pi * static_cast<double>(j) * j * std::beta(2.0 * j, alpha + 1.0);
}

namespace {

void check_alpha_energy(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0, 1)", "alpha");
}

double energy_at_resolution(const AnalyticModel& m, double alpha, const QuadratureSpec& q,
                            const GaussRule& rule, int angular) {
    const double dtheta = two_pi / angular;
    std::vector<cplx> directions(angular);
    for (int k = 0; k < angular; ++k) directions[k] = std::polar(1.0, k * dtheta);
    auto ring = [&](double r) {
        double s = 0.0;
        for (const auto& e : directions) s += std::norm(m.derivative_at(r * e));
        return s * dtheta * r * std::pow(1.0 - r, alpha);
    };
    CompensatedSum total;
    double lo = 0.0;
    for (int k = 1; k <= q.singularity_refinement_depth; ++k) {
        const double hi = 1.0 - std::ldexp(1.0, -k);
        total.add(integrate(rule, lo, hi, ring));
        lo = hi;
    }
    total.add(integrate(rule, lo, 1.0, ring));
    return total.value();
}

}  // namespace

double dirichlet_energy_quadrature(const AnalyticModel& m, double alpha, const QuadratureSpec& q) {
    check_alpha_energy(alpha);
    q.validate();
    const auto rule = gauss_legendre(q.radial_nodes);
    int angular = q.angular_nodes;
    double value = energy_at_resolution(m, alpha, q, rule, angular);
    if (m.kind() == ModelKind::taylor) return value;
    // TODO: per-ring adaptivity would avoid refining every circle when only the outer ones need it
    while (angular < 8192) {
        angular *= 2;
        const double refined = energy_at_resolution(m, alpha, q, rule, angular);
        const bool settled = std::abs(refined - value) <= 1e-10 * std::abs(refined);
        value = refined;
        if (settled) break;
    }
    return value;
}

double dirichlet_energy(const AnalyticModel& m, double alpha, const QuadratureSpec& q) {
    check_alpha_energy(alpha);
    if (const auto* t = m.as_taylor()) {
        CompensatedSum s;
        for (std::size_t j = 1; j < t->coefficients.size(); ++j)
            s.add(std::norm(t->coefficients[j]) * monomial_energy_weight(static_cast<int>(j), alpha));
        return s.value();
    }
    return dirichlet_energy_quadrature(m, alpha, q);
}

// --- Besov norm --------------------------------------------------------------------------

double besov_norm_estimate(const BoundaryFunction& f, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)", "alpha");
    const std::size_t n = f.size();
    const double h = f.step();
    // Cells [theta_j, theta_j+1] carry the midpoint value and the secant slope.
    std::vector<cplx> mid(n), slope(n);
    for (std::size_t j = 0; j < n; ++j) {
        const cplx a = f[j], b = f[(j + 1) % n];
        mid[j] = 0.5 * (a + b);
        slope[j] = (b - a) / h;
    }
    // |f(x)-f(y)|^2/|x-y|^{1+2a} = [|f(x)-f(y)|^2/|x-y|^2] |x-y|^p, p = 1 - 2a > -1.
    // The bracket is smooth (|f'|^2 on the diagonal); |x-y|^p is integrated exactly over each
    // pair of cells: the hat-weighted mean is the second difference of G(u) = |u|^{p+2}/((p+1)(p+2)).
    const double p = 1.0 - 2.0 * alpha;
    auto g2 = [&](double u) { return std::pow(std::abs(u), p + 2.0) / ((p + 1.0) * (p + 2.0)); };
    std::vector<double> cell_weight(n);
    cell_weight[0] = 2.0 * g2(h);
    for (std::size_t k = 1; k < n; ++k) {
        const double u = static_cast<double>(k) * h;
        cell_weight[k] = g2(u + h) - 2.0 * g2(u) + g2(u - h);
    }
    CompensatedSum total;
    double l2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) l2 += std::norm(f[j]);
    total.add(l2 * h);
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::norm(slope[i]) * cell_weight[0];
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = static_cast<double>(j - i) * h;
            row += 2.0 * std::norm(mid[i] - mid[j]) / (dist * dist) * cell_weight[j - i];
        }
        total.add(row);
    }
    return total.value();
}

BesovResult besov_norm(const BoundaryFunction& f, double alpha) {
    BesovResult result;
    BoundaryFunction level = f;
    result.estimates.push_back(besov_norm_estimate(level, alpha));
    for (int k = 0; k < 2 && level.size() >= 32; ++k) {
        level = level.coarsen();
        result.estimates.push_back(besov_norm_estimate(level, alpha));
    }
    result.value = result.estimates.front();
    if (result.estimates.size() == 3) {
        const double fine = result.estimates[0] - result.estimates[1];
        const double coarse = result.estimates[1] - result.estimates[2];
        // differences that fail to contract geometrically signal a divergent double integral
        const bool settled = std::abs(fine) <= 1e-10 * std::abs(result.value);
        if (!settled && std::abs(fine) >= 0.9 * std::abs(coarse)) {
            result.divergent = true;
            result.value = std::numeric_limits<double>::infinity();
        }
    }
    return result;
}

// --- maximal function and Poisson extension ----------------------------------------------

double maximal_function(const BoundaryFunction& g, double t) {
    const std::size_t n = g.size();
    const double h = g.step();
    const double origin = -pi - 0.5 * h;  // left edge of cell 0
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) prefix[j + 1] = prefix[j] + std::abs(g[j]) * h;
    const double period_total = prefix[n];
    auto cumulative = [&](double x) {
        const double u = x - origin;
        const double periods = std::floor(u / two_pi);
        double rest = u - periods * two_pi;
        auto k = static_cast<std::size_t>(rest / h);
        if (k >= n) k = n - 1;
        rest -= static_cast<double>(k) * h;
        return periods * period_total + prefix[k] + rest * std::abs(g[k]);
    };
    double best = 0.0;
    for (std::size_t j = 0;; ++j) {
        const double delta = std::ldexp(two_pi, -static_cast<int>(j));
        best = std::max(best, (cumulative(t + delta) - cumulative(t - delta)) / (2.0 * delta));
        if ((std::size_t{1} << j) >= n) break;
    }
    return best;
}

cplx poisson_extend(const BoundaryFunction& f, const DiskPoint& z) {
    if (z.modulus() > 1.0 - 1e-6) throw InvalidArgument("point too close to the boundary", "z");
    cplx s{0.0, 0.0};
    for (std::size_t j = 0; j < f.size(); ++j) s += poisson_kernel(z, f.angle(j)) * f[j];
    return s / static_cast<double>(f.size());
}

}  // namespace hdisk
