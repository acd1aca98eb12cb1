#include "hdisk/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "hdisk/errors.hpp"

namespace hdisk::io {

std::string fmt(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

double parse_double(const std::string& s, const std::string& field) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() && s.find_first_not_of(" \r", pos) != std::string::npos) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument("not a number: '" + s + "'", field);
    }
}

// Rows of a CSV with the given header, as numbers.
std::vector<std::vector<double>> read_table(std::istream& is, const std::string& header) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument("empty CSV", "csv");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw InvalidArgument("expected header '" + header + "'", "csv");
    const std::size_t cols = split_csv(header).size();
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != cols) throw InvalidArgument("wrong column count", "csv line " + std::to_string(lineno));
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(parse_double(c, "csv line " + std::to_string(lineno)));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

void write_boundary_function_csv(std::ostream& os, const BoundaryFunction& f) {
    os << "theta,re,im\n";
    for (std::size_t j = 0; j < f.size(); ++j) os << fmt(f.angle(j)) << ',' << fmt(f[j].real()) << ',' << fmt(f[j].imag()) << '\n';
}

BoundaryFunction read_boundary_function_csv(std::istream& is) {
    const auto rows = read_table(is, "theta,re,im");
    std::vector<cplx> s;
    for (const auto& r : rows) s.emplace_back(r[1], r[2]);
    return BoundaryFunction(std::move(s));
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const std::vector<cplx>& v) {
    json a = json::array();
    for (const auto& z : v) a.push_back(to_json(z));
    return a;
}

json to_json(const BoundarySet& e) {
    json j;
    const auto& v = e.variant();
    if (const auto* a = std::get_if<ArcUnion>(&v)) {
        j["type"] = "arcs";
        j["arcs"] = json::array();
        for (const auto& arc : a->arcs) j["arcs"].push_back({arc.start(), arc.length()});
    } else if (const auto* c = std::get_if<CantorSet>(&v)) {
        j["type"] = "cantor";
        j["base"] = {c->base.start(), c->base.length()};
        j["ratio"] = c->ratio;
        j["depth"] = c->depth;
    } else {
        j["type"] = "points";
        j["angles"] = json::array();
        for (const auto& p : std::get<PointSet>(v).points) j["angles"].push_back(p.theta());
    }
    return j;
}

namespace {

double num(const json& j, const char* key, const std::string& field) {
    if (!j.contains(key) || !j.at(key).is_number()) throw InvalidArgument("missing or non-numeric", field + "." + key);
    return j.at(key).get<double>();
}

Arc arc_from(const json& a, const std::string& field) {
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
        throw InvalidArgument("arc must be [start, length]", field);
    return Arc(a[0].get<double>(), a[1].get<double>());
}

}  // namespace

BoundarySet boundary_set_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw InvalidArgument("expected an object with a type", "set");
    const auto type = j.at("type").get<std::string>();
    if (type == "full_circle") return BoundarySet::full_circle();
    if (type == "arcs") {
        if (!j.contains("arcs") || !j.at("arcs").is_array()) throw InvalidArgument("missing arc list", "set.arcs");
        std::vector<Arc> arcs;
        for (const auto& a : j.at("arcs")) arcs.push_back(arc_from(a, "set.arcs"));
        return BoundarySet::arcs(std::move(arcs));
    }
    if (type == "cantor") {
        if (!j.contains("base")) throw InvalidArgument("missing base arc", "set.base");
        const double depth = num(j, "depth", "set");
        if (depth != std::floor(depth)) throw InvalidArgument("must be an integer", "set.depth");
        return BoundarySet::cantor(arc_from(j.at("base"), "set.base"), num(j, "ratio", "set"), static_cast<int>(depth));
    }
    if (type == "points") {
        if (!j.contains("angles") || !j.at("angles").is_array()) throw InvalidArgument("missing angle list", "set.angles");
        std::vector<BoundaryPoint> pts;
        for (const auto& a : j.at("angles")) {
            if (!a.is_number()) throw InvalidArgument("angles must be numbers", "set.angles");
            pts.emplace_back(a.get<double>());
        }
        return BoundarySet::points(std::move(pts));
    }
    throw InvalidArgument("unknown set type '" + type + "'", "set.type");
}

void write_plan_csv(std::ostream& os, const SamplingPlan& plan) {
    os << "index,re,im\n";
    for (std::size_t i = 0; i < plan.size(); ++i)
        os << i << ',' << fmt(plan.points[i].re()) << ',' << fmt(plan.points[i].im()) << '\n';
}

json to_json(const SamplingPlan& plan) {
    json j;
    j["scheme"] = scheme_name(plan.scheme);
    if (const auto* d = std::get_if<DyadicScheme>(&plan.scheme)) {
        j["levels"] = d->levels;
        j["density_factor"] = d->density_factor;
    } else if (const auto* r = std::get_if<RadialRayScheme>(&plan.scheme)) {
        j["anchor_angles"] = r->anchor_angles;
        j["radii"] = r->radii;
    }
    j["target"] = to_json(plan.target);
    j["size"] = plan.size();
    json pts = json::array();
    for (const auto& p : plan.points) pts.push_back(to_json(p.value()));
    j["points"] = std::move(pts);
    return j;
}

void write_coverage_csv(std::ostream& os, const CoverageReport& r) {
    os << "theta,count,in_target\n";
    for (std::size_t j = 0; j < r.angles.size(); ++j)
        os << fmt(r.angles[j]) << ',' << r.counts[j] << ',' << (r.in_target[j] ? 1 : 0) << '\n';
}

json to_json(const KakutaniReport& r) {
    json j;
    j["ladder"] = r.ladder;
    json lp = json::array(), pp = json::array();
    for (std::size_t i = 0; i < r.ladder.size(); ++i) {
        // -inf is not representable in JSON
        if (std::isinf(r.log_partial[i]))
            lp.push_back("-inf");
        else
            lp.push_back(r.log_partial[i]);
        pp.push_back(r.partial[i]);
    }
    j["log_partial"] = std::move(lp);
    j["partial"] = std::move(pp);
    j["classification"] = to_string(r.classification);
    return j;
}

void write_kakutani_factors_csv(std::ostream& os, const KakutaniReport& r) {
    os << "k,re_gap,im_gap,log_factor\n";
    for (std::size_t k = 0; k < r.gaps.size(); ++k)
        os << k + 1 << ',' << fmt(r.gaps[k].real()) << ',' << fmt(r.gaps[k].imag()) << ','
           << (std::isinf(r.log_factors[k]) ? std::string("-inf") : fmt(r.log_factors[k])) << '\n';
}

void write_observations_csv(std::ostream& os, const ObservationSeries& s) {
    os << "n,re_z,im_z,re_x,im_x\n";
    for (std::size_t n = 0; n < s.size(); ++n) {
        const auto& o = s.observations[n];
        os << n << ',' << fmt(o.z.re()) << ',' << fmt(o.z.im()) << ',' << fmt(o.x.real()) << ',' << fmt(o.x.imag())
           << '\n';
    }
}

ObservationSeries read_observations_csv(std::istream& is) {
    const auto rows = read_table(is, "n,re_z,im_z,re_x,im_x");
    if (rows.empty()) throw InvalidArgument("no observations", "observations");
    ObservationSeries s;
    for (const auto& r : rows) s.observations.push_back({DiskPoint(r[1], r[2]), cplx{r[3], r[4]}});
    return s;
}

json to_json(const FitResult& r) {
    json j;
    j["degree"] = r.degree;
    j["coefficients"] = to_json(r.coefficients);
    j["residual_norm"] = r.residual_norm;
    j["penalty"] = r.penalty;
    json curve = json::array();
    for (const auto& [d, s] : r.validation_curve) curve.push_back({{"degree", d}, {"holdout_rms", s}});
    j["validation_curve"] = std::move(curve);
    return j;
}

json to_json(const ExperimentReport& r) {
    json j;
    j["ladder"] = r.ladder;
    j["seeds"] = r.seeds;
    j["median_sup_error"] = r.median_sup_error;
    j["median_coefficient_error"] = r.median_coefficient_error;
    j["median_boundary_sup_error"] = r.median_boundary_sup_error;
    j["slope"] = r.slope;
    std::size_t failed = 0;
    json failures = json::array();
    for (const auto& c : r.cells)
        if (!c.ok) {
            ++failed;
            failures.push_back({{"n", c.n}, {"seed", c.seed}, {"message", c.message}});
        }
    j["failed_cells"] = failed;
    j["failures"] = std::move(failures);
    return j;
}

void write_experiment_cells_csv(std::ostream& os, const ExperimentReport& r) {
    os << "n,seed,ok,degree,sup_error,coefficient_error,boundary_sup_error\n";
    for (const auto& c : r.cells)
        os << c.n << ',' << c.seed << ',' << (c.ok ? 1 : 0) << ',' << c.degree << ',' << fmt(c.sup_error) << ','
           << fmt(c.coefficient_error) << ',' << fmt(c.boundary_sup_error) << '\n';
}

void write_experiment_summary_csv(std::ostream& os, const ExperimentReport& r) {
    os << "n,median_sup_error,median_coefficient_error,median_boundary_sup_error\n";
    for (std::size_t k = 0; k < r.ladder.size(); ++k)
        os << r.ladder[k] << ',' << fmt(r.median_sup_error[k]) << ',' << fmt(r.median_coefficient_error[k]) << ','
           << fmt(r.median_boundary_sup_error[k]) << '\n';
}

}  // namespace hdisk::io
