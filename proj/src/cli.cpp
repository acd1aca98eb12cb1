#include "hdisk/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "hdisk/errors.hpp"

namespace hdisk::cli {

using io::json;

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"certify", "design",     "separation", "kakutani",
                                                "simulate", "fit", "experiment", "measure"};
    return names;
}

namespace {

enum class LogLevel { quiet = 0, warn = 1, info = 2, debug = 3 };

LogLevel log_level() {
    const char* v = std::getenv("HD_LOG");
    if (!v) return LogLevel::warn;
    const std::string s(v);
    if (s == "quiet" || s == "0") return LogLevel::quiet;
    if (s == "info" || s == "2") return LogLevel::info;
    if (s == "debug" || s == "3") return LogLevel::debug;
    return LogLevel::warn;
}

void log(std::ostream& err, LogLevel level, const std::string& msg) {
    if (level <= log_level()) err << "[hdid] " << msg << '\n';
}

// A config object whose keys are consumed one by one; leftover keys are rejected and every value
// read (or defaulted) is echoed into the effective config.
class Block {
public:
    Block(const json* src, std::string path) : src_(src), path_(std::move(path)) {
        if (src_ && !src_->is_object()) throw InvalidArgument("expected an object", path_.empty() ? "config" : path_);
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* raw(const std::string& key) {
        used_.insert(key);
        if (!src_ || !src_->contains(key)) return nullptr;
        return &src_->at(key);
    }

    double number(const std::string& key, double def) {
        const json* v = raw(key);
        if (v && !v->is_number()) throw InvalidArgument("expected a number", field(key));
        const double x = v ? v->get<double>() : def;
        if (!std::isfinite(x)) throw InvalidArgument("expected a finite number", field(key));
        eff_[key] = x;
        return x;
    }

    long long integer(const std::string& key, long long def) {
        const json* v = raw(key);
        if (v && !v->is_number_integer()) throw InvalidArgument("expected an integer", field(key));
        const long long x = v ? v->get<long long>() : def;
        eff_[key] = x;
        return x;
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t def) {
        const json* v = raw(key);
        if (v && !v->is_number_unsigned()) throw InvalidArgument("expected a nonnegative integer", field(key));
        const std::uint64_t x = v ? v->get<std::uint64_t>() : def;
        eff_[key] = x;
        return x;
    }

    bool boolean(const std::string& key, bool def) {
        const json* v = raw(key);
        if (v && !v->is_boolean()) throw InvalidArgument("expected true or false", field(key));
        const bool x = v ? v->get<bool>() : def;
        eff_[key] = x;
        return x;
    }

    std::string text(const std::string& key, const std::string& def) {
        const json* v = raw(key);
        if (v && !v->is_string()) throw InvalidArgument("expected a string", field(key));
        std::string x = v ? v->get<std::string>() : def;
        eff_[key] = x;
        return x;
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> def) {
        const json* v = raw(key);
        if (v) {
            if (!v->is_array()) throw InvalidArgument("expected an array of numbers", field(key));
            def.clear();
            for (const auto& e : *v) {
                if (!e.is_number()) throw InvalidArgument("expected an array of numbers", field(key));
                def.push_back(e.get<double>());
            }
        }
        eff_[key] = def;
        return def;
    }

    std::vector<std::size_t> sizes(const std::string& key, std::vector<std::size_t> def) {
        const json* v = raw(key);
        if (v) {
            if (!v->is_array()) throw InvalidArgument("expected an array of integers", field(key));
            def.clear();
            for (const auto& e : *v) {
                if (!e.is_number_unsigned()) throw InvalidArgument("expected an array of nonnegative integers", field(key));
                def.push_back(e.get<std::size_t>());
            }
        }
        eff_[key] = def;
        return def;
    }

    cplx complex(const std::string& key, cplx def) {
        const json* v = raw(key);
        const cplx z = v ? parse_complex(*v, field(key)) : def;
        eff_[key] = io::to_json(z);
        return z;
    }

    std::vector<cplx> complexes(const std::string& key, std::optional<std::vector<cplx>> def) {
        const json* v = raw(key);
        if (!v && !def) throw InvalidArgument("required", field(key));
        std::vector<cplx> out;
        if (v) {
            if (!v->is_array()) throw InvalidArgument("expected an array of complex numbers", field(key));
            for (const auto& e : *v) out.push_back(parse_complex(e, field(key)));
        } else {
            out = *def;
        }
        eff_[key] = io::to_json(out);
        return out;
    }

    Block child(const std::string& key) { return Block(raw(key), field(key)); }
    void put(const std::string& key, json value) { eff_[key] = std::move(value); }
    void adopt(const std::string& key, Block& b) {
        b.finish();
        eff_[key] = b.effective();
    }
    // Overrides an echoed value (used for command-line overrides and resolved defaults).
    void set(const std::string& key, json value) { eff_[key] = std::move(value); }
    const json& effective() const { return eff_; }

    void finish() const {
        if (!src_) return;
        for (const auto& [k, v] : src_->items())
            if (!used_.count(k)) throw InvalidArgument("unknown key", field(k));
    }

    static cplx parse_complex(const json& v, const std::string& field) {
        if (v.is_number()) return {v.get<double>(), 0.0};
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
            return {v[0].get<double>(), v[1].get<double>()};
        throw InvalidArgument("expected a number or [re, im]", field);
    }

private:
    const json* src_;
    std::string path_;
    std::set<std::string> used_;
    json eff_ = json::object();
};

BoundarySet parse_set(Block& root) {
    Block b = root.child("set");
    const std::string type = b.text("type", "full_circle");
    json j{{"type", type}};
    if (type == "arcs") {
        const json* arcs = b.raw("arcs");
        if (!arcs) throw InvalidArgument("required", b.field("arcs"));
        j["arcs"] = *arcs;
    } else if (type == "cantor") {
        const json* base = b.raw("base");
        j["base"] = base ? *base : json::array({-0.5, 1.0});
        j["ratio"] = b.number("ratio", 1.0 / 3.0);
        j["depth"] = b.integer("depth", 8);
    } else if (type == "points") {
        const json* a = b.raw("angles");
        if (!a) throw InvalidArgument("required", b.field("angles"));
        j["angles"] = *a;
    } else if (type != "full_circle") {
        throw InvalidArgument("unknown set type '" + type + "'", b.field("type"));
    }
    b.finish();
    BoundarySet e = io::boundary_set_from_json(j);
    root.put("set", type == "full_circle" ? j : io::to_json(e));
    return e;
}

GaugeFunction parse_gauge(Block& root) {
    Block b = root.child("gauge");
    const std::string type = b.text("type", "power");
    std::optional<GaugeFunction> h;
    if (type == "power") {
        h = GaugeFunction::power(b.number("exponent", 1.0));
    } else if (type == "tlog") {
        h = GaugeFunction::tlog();
    } else if (type == "table") {
        const json* t = b.raw("points");
        if (!t || !t->is_array()) throw InvalidArgument("expected [[t, h], ...]", b.field("points"));
        std::vector<std::pair<double, double>> table;
        for (const auto& row : *t) {
            if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
                throw InvalidArgument("expected [[t, h], ...]", b.field("points"));
            table.emplace_back(row[0].get<double>(), row[1].get<double>());
        }
        b.put("points", *t);
        h = GaugeFunction::custom(std::move(table));
    } else {
        throw InvalidArgument("unknown gauge type '" + type + "'", b.field("type"));
    }
    root.adopt("gauge", b);
    return *h;
}

SamplingPlan parse_plan(Block& root, const BoundarySet& target) {
    Block b = root.child("plan");
    const std::string scheme = b.text("scheme", "dyadic");
    SamplingPlan plan;
    if (scheme == "dyadic") {
        const auto levels = b.integer("levels", 8);
        const auto df = b.integer("density_factor", 1);
        plan = generate_dyadic(target, static_cast<int>(std::clamp<long long>(levels, -1, 1000)),
                               static_cast<int>(std::clamp<long long>(df, -1, 1 << 20)));
    } else if (scheme == "radial_ray") {
        auto angles = b.numbers("anchor_angles", {0.0});
        auto radii = b.numbers("radii", {0.5, 0.75, 0.875, 0.9375});
        plan = generate_radial_ray(target, std::move(angles), std::move(radii));
    } else if (scheme == "single_ray") {
        const auto count = b.integer("count", 256);
        if (count < 1 || count > 100000) throw InvalidArgument("count must lie in [1, 100000]", b.field("count"));
        plan = single_ray_plan(static_cast<std::size_t>(count));
        plan.target = target;
    } else {
        throw InvalidArgument("unknown plan scheme '" + scheme + "'", b.field("scheme"));
    }
    root.adopt("plan", b);
    return plan;
}

AnalyticModel parse_model_block(Block& b) {
    const std::string type = b.text("type", "stock");
    if (type == "stock") {
        const auto idx = b.integer("index", 3);
        const auto family = stock_family();
        if (idx < 0 || idx >= static_cast<long long>(family.size()))
            throw InvalidArgument("stock index must lie in [0, 6]", b.field("index"));
        return family[static_cast<std::size_t>(idx)];
    }
    if (type == "taylor") return AnalyticModel::taylor(b.complexes("coefficients", std::nullopt));
    if (type == "rational") {
        auto num = b.complexes("numerator", std::nullopt);
        auto den = b.complexes("denominator", std::nullopt);
        return AnalyticModel::rational(std::move(num), std::move(den));
    }
    if (type == "blaschke") {
        const auto zs = b.complexes("zeros", std::nullopt);
        ZeroSequence zeros;
        for (const auto& z : zs) zeros.zeros.emplace_back(z);
        return AnalyticModel::blaschke(std::move(zeros), b.complex("constant", {1.0, 0.0}));
    }
    throw InvalidArgument("unknown model type '" + type + "'", b.field("type"));
}

AnalyticModel parse_model(Block& root, const std::string& key = "model") {
    Block b = root.child(key);
    AnalyticModel m = parse_model_block(b);
    root.adopt(key, b);
    return m;
}

std::vector<AnalyticModel> parse_models(Block& root, std::size_t default_count) {
    const json* v = root.raw("models");
    std::vector<AnalyticModel> out;
    json eff = json::array();
    if (!v) {
        const auto family = stock_family();
        for (std::size_t i = 0; i < default_count; ++i) {
            out.push_back(family[i]);
            eff.push_back({{"type", "stock"}, {"index", i}});
        }
    } else {
        if (!v->is_array()) throw InvalidArgument("expected an array of models", "models");
        for (std::size_t i = 0; i < v->size(); ++i) {
            Block b(&(*v)[i], "models[" + std::to_string(i) + "]");
            out.push_back(parse_model_block(b));
            b.finish();
            eff.push_back(b.effective());
        }
    }
    root.put("models", eff);
    return out;
}

NoiseModel parse_noise(Block& root) {
    Block b = root.child("noise");
    const std::string type = b.text("type", "gaussian");
    std::optional<NoiseModel> p;
    if (type == "gaussian") {
        p = NoiseModel::gaussian(b.number("sigma", 0.1));
    } else if (type == "uniform_disk") {
        p = NoiseModel::uniform_disk(b.number("radius", 0.1));
    } else if (type == "grid") {
        const double w = b.number("cell_width", 0.1);
        const auto n = b.integer("n", 1);
        if (n < 1 || n > 1024) throw InvalidArgument("n must lie in [1, 1024]", b.field("n"));
        auto weights = b.numbers("weights", {1.0});
        p = NoiseModel(GridDensity{w, static_cast<std::size_t>(n), std::move(weights)});
    } else if (type == "none") {
        p = NoiseModel::none();
    } else {
        throw InvalidArgument("unknown noise type '" + type + "'", b.field("type"));
    }
    root.adopt("noise", b);
    return *p;
}

FitConfig parse_fit(Block& root) {
    Block b = root.child("fit");
    FitConfig c;
    const auto degree = b.integer("degree", c.degree);
    if (degree < 0 || degree > 256) throw InvalidArgument("degree must lie in [0, 256]", "fit.degree");
    c.degree = static_cast<int>(degree);
    c.lambda = b.number("lambda", c.lambda);
    c.alpha = b.number("alpha", c.alpha);
    c.validation_fraction = b.number("validation_fraction", c.validation_fraction);
    c.validate();
    root.adopt("fit", b);
    return c;
}

std::uint64_t parse_seed(Block& root, const RunOptions& opt, const std::string& key = "seed") {
    std::uint64_t s = root.unsigned_integer(key, 1);
    if (opt.seed) {
        s = *opt.seed;
        root.set(key, s);
    }
    return s;
}

std::vector<std::size_t> default_ladder(std::size_t n) {
    std::vector<std::size_t> l;
    for (std::size_t d : {8u, 4u, 2u, 1u})
        if (n / d > 0 && (l.empty() || n / d > l.back())) l.push_back(n / d);
    return l;
}

struct Output {
    json result = json::object();
    std::vector<std::pair<std::string, std::string>> files;

    template <class F>
    void csv(const std::string& name, F&& write) {
        std::ostringstream os;
        write(os);
        files.emplace_back(name, os.str());
    }
};

void cmd_certify(Block& root, Output& out) {
    const BoundarySet e = parse_set(root);
    const GaugeFunction h = parse_gauge(root);
    const std::string mode_name = root.text("content_mode", "exact_dp");
    ContentMode mode;
    if (mode_name == "exact_dp")
        mode = ContentMode::exact_dp;
    else if (mode_name == "greedy")
        mode = ContentMode::greedy;
    else if (mode_name == "brute_force")
        mode = ContentMode::brute_force;
    else
        throw InvalidArgument("expected exact_dp, greedy or brute_force", "content_mode");
    const double threshold = root.number("threshold", 1e-9);
    Block cap = root.child("capacity");
    const bool cap_on = cap.boolean("enabled", false);
    const double cap_alpha = cap.number("alpha", 0.5);
    const auto cap_grid = cap.integer("grid_points", 512);
    const std::string kernel = cap.text("kernel", "angular");
    if (kernel != "angular" && kernel != "chordal") throw InvalidArgument("expected angular or chordal", "capacity.kernel");
    if (cap_grid < 8 || cap_grid > 8192) throw InvalidArgument("grid_points must lie in [8, 8192]", "capacity.grid_points");
    root.adopt("capacity", cap);
    root.finish();

    const auto cert = certify_theorem1_set(e, h, threshold);
    const auto cover = hausdorff_content_cover(e, h, mode);
    out.result["pieces"] = cert.pieces;
    out.result["total_length"] = e.total_length();
    out.result["gauge"] = h.describe();
    out.result["admissible"] = to_string(cert.admissible);
    out.result["content"] = cover.value;
    out.result["content_mode"] = to_string(mode);
    out.result["exact_content"] = cert.content;
    out.result["threshold"] = cert.threshold;
    out.result["pass"] = cert.pass;
    out.result["hypotheses_met"] = cert.hypotheses_met;
    out.result["cover_runs"] = cover.cover.size();
    if (cap_on) {
        const auto c = alpha_capacity(e, cap_alpha, static_cast<int>(cap_grid),
                                      kernel == "angular" ? KernelMode::angular : KernelMode::chordal);
        out.result["capacity"] = {{"alpha", cap_alpha}, {"kernel", kernel}, {"capacity", c.capacity},
                                  {"energy", c.energy}, {"gap", c.gap}, {"iterations", c.iterations},
                                  {"cells", c.cell_centers.size()}};
        out.csv("capacity_weights.csv", [&](std::ostream& os) {
            os << "theta,weight\n";
            for (std::size_t i = 0; i < c.weights.size(); ++i)
                os << io::fmt(c.cell_centers[i]) << ',' << io::fmt(c.weights[i]) << '\n';
        });
    }
    const auto& pieces = e.segments();
    out.csv("cover.csv", [&](std::ostream& os) {
        os << "first,count,hull,cost\n";
        for (const auto& r : cover.cover) {
            const double hull = run_hull(pieces, r);
            os << r.first << ',' << r.count << ',' << io::fmt(hull) << ',' << io::fmt(h(hull)) << '\n';
        }
    });
    const auto q = admissibility_probe(h);
    out.csv("probe.csv", [&](std::ostream& os) {
        os << "j,t,q\n";
        for (std::size_t j = 0; j < q.size(); ++j)
            os << j + 1 << ',' << io::fmt(std::ldexp(1.0, -static_cast<int>(j + 1))) << ',' << io::fmt(q[j]) << '\n';
    });
}

void cmd_design(Block& root, Output& out) {
    const BoundarySet e = parse_set(root);
    const SamplingPlan plan = parse_plan(root, e);
    const auto grid = root.integer("coverage_grid", 4096);
    if (grid < 64 || grid > (1 << 20)) throw InvalidArgument("coverage_grid must lie in [64, 2^20]", "coverage_grid");
    root.finish();

    const auto cov = validate_coverage(plan, static_cast<int>(grid));
    const auto bs = blaschke_sum(plan);
    out.result["size"] = plan.size();
    out.result["scheme"] = scheme_name(plan.scheme);
    out.result["tail_condition"] = plan.tail_condition();
    out.result["coverage"] = {{"grid", cov.grid},
                              {"threshold", cov.threshold},
                              {"target_grid_points", cov.target_points},
                              {"min_count", cov.min_count},
                              {"uncovered_fraction", cov.uncovered_fraction},
                              {"uncovered_fraction_outside", cov.uncovered_fraction_outside}};
    out.result["blaschke_sum"] = {{"total", bs.total}, {"level_slope", bs.level_slope}, {"verdict", to_string(bs.verdict)}};
    out.csv("plan.csv", [&](std::ostream& os) { io::write_plan_csv(os, plan); });
    out.files.emplace_back("plan.json", io::to_json(plan).dump(2) + "\n");
    out.csv("coverage.csv", [&](std::ostream& os) { io::write_coverage_csv(os, cov); });
    out.csv("levels.csv", [&](std::ostream& os) {
        os << "level,sum\n";
        for (std::size_t i = 0; i < bs.levels.size(); ++i) os << bs.levels[i] << ',' << io::fmt(bs.level_sums[i]) << '\n';
    });
}

void cmd_separation(Block& root, Output& out) {
    const BoundarySet e = parse_set(root);
    const SamplingPlan plan = parse_plan(root, e);
    const auto models = parse_models(root, stock_family().size());
    auto prefix = root.unsigned_integer("prefix", 0);
    if (prefix == 0) prefix = plan.size();
    root.set("prefix", prefix);
    root.finish();
    if (models.size() < 2) throw InvalidArgument("need at least two models", "models");

    json pairs = json::array();
    std::ostringstream os;
    os << "i,j,verdict,slope,final_sum,identically_zero\n";
    std::size_t divergent = 0;
    for (std::size_t i = 0; i < models.size(); ++i)
        for (std::size_t j = i + 1; j < models.size(); ++j) {
            const auto s = separation_sum(models[i], models[j], plan, prefix);
            divergent += s.verdict == TrendVerdict::divergent;
            os << i << ',' << j << ',' << to_string(s.verdict) << ',' << io::fmt(s.slope) << ','
               << io::fmt(s.partial_sums.back()) << ',' << (s.identically_zero ? 1 : 0) << '\n';
        }
    out.files.emplace_back("pairs.csv", os.str());
    const std::size_t n = models.size();
    out.result["plan_size"] = plan.size();
    out.result["prefix"] = prefix;
    out.result["pairs"] = n * (n - 1) / 2;
    out.result["divergent_pairs"] = divergent;
}

void cmd_kakutani(Block& root, Output& out) {
    const NoiseModel p = parse_noise(root);
    const json* gaps_cfg = root.raw("gaps");
    std::vector<cplx> gaps;
    if (gaps_cfg) {
        // d_k = scale k^exponent, k = 1..count
        Block g(gaps_cfg, "gaps");
        const double scale = g.number("scale", 1.0);
        const double exponent = g.number("exponent", -1.0);
        const auto count = g.integer("count", 1000);
        if (count < 1 || count > 10'000'000) throw InvalidArgument("count must lie in [1, 1e7]", "gaps.count");
        root.adopt("gaps", g);
        gaps.resize(static_cast<std::size_t>(count));
        for (std::size_t k = 0; k < gaps.size(); ++k) gaps[k] = scale * std::pow(static_cast<double>(k + 1), exponent);
    } else {
        const BoundarySet e = parse_set(root);
        const SamplingPlan plan = parse_plan(root, e);
        const auto models = parse_models(root, 2);
        if (models.size() != 2) throw InvalidArgument("expected exactly two models", "models");
        gaps.resize(plan.size());
        for (std::size_t k = 0; k < plan.size(); ++k)
            gaps[k] = models[0].evaluate(plan.points[k]) - models[1].evaluate(plan.points[k]);
    }
    auto ladder = root.sizes("ladder", {});
    if (ladder.empty()) ladder = default_ladder(gaps.size());
    root.set("ladder", ladder);
    root.finish();

    const auto r = kakutani_from_gaps(std::move(gaps), p, ladder);
    out.result = io::to_json(r);
    out.result["noise"] = p.describe();
    out.csv("factors.csv", [&](std::ostream& os) { io::write_kakutani_factors_csv(os, r); });
    out.csv("ladder.csv", [&](std::ostream& os) {
        os << "n,log_partial,partial\n";
        for (std::size_t i = 0; i < r.ladder.size(); ++i)
            os << r.ladder[i] << ',' << (std::isinf(r.log_partial[i]) ? std::string("-inf") : io::fmt(r.log_partial[i]))
               << ',' << io::fmt(r.partial[i]) << '\n';
    });
}

void cmd_simulate(Block& root, Output& out, const RunOptions& opt) {
    const BoundarySet e = parse_set(root);
    const SamplingPlan plan = parse_plan(root, e);
    const AnalyticModel s = parse_model(root);
    const NoiseModel p = parse_noise(root);
    const auto seed = parse_seed(root, opt);
    root.finish();
    const auto obs = simulate_observations(s, plan, p, seed);
    out.result["size"] = obs.size();
    out.result["model"] = s.describe();
    out.result["noise"] = p.describe();
    out.result["seed"] = seed;
    out.csv("observations.csv", [&](std::ostream& os) { io::write_observations_csv(os, obs); });
}

void cmd_fit(Block& root, Output& out, const RunOptions& opt) {
    const std::string path = root.text("observations", "");
    const FitConfig cfg = parse_fit(root);
    ObservationSeries obs;
    std::optional<AnalyticModel> truth;
    if (!path.empty()) {
        root.finish();
        std::ifstream in(path);
        if (!in) throw InvalidArgument("cannot open '" + path + "'", "observations");
        obs = io::read_observations_csv(in);
    } else {
        const BoundarySet e = parse_set(root);
        const SamplingPlan plan = parse_plan(root, e);
        truth = parse_model(root);
        const NoiseModel p = parse_noise(root);
        const auto seed = parse_seed(root, opt);
        root.finish();
        obs = simulate_observations(*truth, plan, p, seed);
    }
    const auto fit = fit_model(obs, cfg);
    out.result = io::to_json(fit);
    out.result["observations"] = obs.size();
    if (truth) out.result["sup_error"] = sup_error(fit.fitted, *truth, evaluation_grid());
    out.csv("coefficients.csv", [&](std::ostream& os) {
        os << "j,re,im\n";
        for (std::size_t j = 0; j < fit.coefficients.size(); ++j)
            os << j << ',' << io::fmt(fit.coefficients[j].real()) << ',' << io::fmt(fit.coefficients[j].imag()) << '\n';
    });
}

void cmd_experiment(Block& root, Output& out, const RunOptions& opt, std::ostream& err) {
    const BoundarySet e = parse_set(root);
    const SamplingPlan plan = parse_plan(root, e);
    const AnalyticModel s = parse_model(root);
    const NoiseModel p = parse_noise(root);
    const FitConfig cfg = parse_fit(root);
    const auto ladder = root.sizes("ladder", {100, 400, 1600});
    const auto seed = parse_seed(root, opt);
    const auto reps = root.integer("replicates", 20);
    if (reps < 1 || reps > 10000) throw InvalidArgument("replicates must lie in [1, 10000]", "replicates");
    const bool control = root.boolean("negative_control", true);
    root.finish();

    std::vector<std::uint64_t> seeds;
    for (long long i = 0; i < reps; ++i) seeds.push_back(seed + static_cast<std::uint64_t>(i));
    log(err, LogLevel::info, "experiment: " + std::to_string(ladder.size() * seeds.size()) + " cells");
    const auto r = consistency_experiment(s, plan, p, cfg, ladder, seeds);
    out.result = io::to_json(r);
    out.csv("cells.csv", [&](std::ostream& os) { io::write_experiment_cells_csv(os, r); });
    out.csv("summary.csv", [&](std::ostream& os) { io::write_experiment_summary_csv(os, r); });

    if (control) {
        if (s.kind() == ModelKind::blaschke) {
            out.result["negative_control"] = "skipped: needs a Taylor or rational model";
            log(err, LogLevel::warn, "negative control skipped for a Blaschke model");
        } else {
            const AnalyticModel g = perturb_at_one(s);
            const auto ray = single_ray_plan();
            const auto bad = residual_separation(s, g, ray, p, seed);
            const auto good = residual_separation(s, g, plan, p, seed);
            out.csv("negative_control.csv", [&](std::ostream& os) {
                os << "plan,n,rss_true,rss_alternative,relative_gap,separating,separation,kakutani\n";
                for (const auto& [name, rr] : {std::pair{"single_ray", bad}, std::pair{"configured", good}})
                    os << name << ',' << rr.n << ',' << io::fmt(rr.rss_true) << ',' << io::fmt(rr.rss_alternative) << ','
                       << io::fmt(rr.relative_gap) << ',' << (rr.separating ? 1 : 0) << ',' << to_string(rr.separation)
                       << ',' << to_string(rr.kakutani) << '\n';
            });
            out.result["negative_control"] = {{"alternative", g.describe()},
                                              {"single_ray_separating", bad.separating},
                                              {"configured_plan_separating", good.separating}};
        }
    }
}

void cmd_measure(Block& root, Output& out) {
    const AnalyticModel m = parse_model(root);
    const double alpha = root.number("alpha", 0.5);
    if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0, 1)", "alpha");
    Block qb = root.child("quadrature");
    QuadratureSpec q;
    q.radial_nodes = static_cast<int>(qb.integer("radial_nodes", q.radial_nodes));
    q.angular_nodes = static_cast<int>(qb.integer("angular_nodes", q.angular_nodes));
    q.singularity_refinement_depth = static_cast<int>(qb.integer("singularity_refinement_depth", q.singularity_refinement_depth));
    q.validate();
    root.adopt("quadrature", qb);
    const auto samples = root.integer("boundary_samples", 1024);
    if (samples < 16 || samples > (1 << 20) || (samples & (samples - 1)) != 0)
        throw InvalidArgument("boundary_samples must be a power of two in [16, 2^20]", "boundary_samples");
    root.finish();

    const auto trace = BoundaryFunction::trace(m, static_cast<std::size_t>(samples));
    // the Besov seminorm needs alpha > 0
    const auto besov = alpha > 0.0 ? besov_norm(trace, alpha) : BesovResult{};
    double gmax = 0.0;
    for (std::size_t j = 0; j < trace.size(); ++j) gmax = std::max(gmax, maximal_function(trace, trace.angle(j)));
    out.result["model"] = m.describe();
    out.result["alpha"] = alpha;
    out.result["dirichlet_energy"] = dirichlet_energy(m, alpha, q);
    out.result["dirichlet_energy_quadrature"] = dirichlet_energy_quadrature(m, alpha, q);
    if (alpha > 0.0)
        out.result["besov"] = {{"value", besov.value}, {"divergent", besov.divergent}, {"estimates", besov.estimates}};
    else
        out.result["besov"] = nullptr;
    out.result["maximal_function_max"] = gmax;
    out.csv("trace.csv", [&](std::ostream& os) { io::write_boundary_function_csv(os, trace); });
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write '" + p.string() + "'", "out");
    f << content;
    if (!f) throw InvalidArgument("cannot write '" + p.string() + "'", "out");
}

}  // namespace

Exit run_command(const std::string& command, const json& cfg, const std::filesystem::path& out_dir,
                 const RunOptions& opt, std::ostream& err) {
    try {
        const auto& names = command_names();
        if (std::find(names.begin(), names.end(), command) == names.end())
            throw InvalidArgument("unknown command '" + command + "'", "command");
        if (opt.threads) {
            if (*opt.threads < 1) throw InvalidArgument("must be >= 1", "threads");
            omp_set_num_threads(*opt.threads);
        }
        Block root(&cfg, "");
        const auto version = root.integer("schema_version", schema_version);
        if (version != schema_version)
            throw InvalidArgument("unsupported schema version " + std::to_string(version), "schema_version");
        root.put("command", command);
        if (cfg.contains("command")) {
            root.text("command", command);
            if (cfg.at("command") != command) throw InvalidArgument("does not match the requested command", "command");
        }

        Output out;
        if (command == "certify")
            cmd_certify(root, out);
        else if (command == "design")
            cmd_design(root, out);
        else if (command == "separation")
            cmd_separation(root, out);
        else if (command == "kakutani")
            cmd_kakutani(root, out);
        else if (command == "simulate")
            cmd_simulate(root, out, opt);
        else if (command == "fit")
            cmd_fit(root, out, opt);
        else if (command == "experiment")
            cmd_experiment(root, out, opt, err);
        else
            cmd_measure(root, out);

        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw InvalidArgument("cannot create output directory: " + ec.message(), "out");
        write_file(out_dir / "effective_config.json", root.effective().dump(2) + "\n");
        json result{{"command", command}, {"status", "ok"}};
        for (auto& [k, v] : out.result.items()) result[k] = v;
        write_file(out_dir / "result.json", result.dump(2) + "\n");
        for (const auto& [name, content] : out.files) write_file(out_dir / name, content);
        log(err, LogLevel::info, command + ": wrote " + std::to_string(out.files.size() + 2) + " files to " + out_dir.string());
        return Exit::ok;
    } catch (const InvalidArgument& e) {
        log(err, LogLevel::quiet, std::string("validation error: ") + e.what());
        return Exit::validation;
    } catch (const json::exception& e) {
        log(err, LogLevel::quiet, std::string("validation error: ") + e.what());
        return Exit::validation;
    } catch (const std::invalid_argument& e) {
        log(err, LogLevel::quiet, std::string("validation error: ") + e.what());
        return Exit::validation;
    } catch (const NumericFailure& e) {
        log(err, LogLevel::quiet, std::string("numeric failure: ") + e.what());
        return Exit::numeric;
    } catch (const std::exception& e) {
        log(err, LogLevel::quiet, std::string("numeric failure: ") + e.what());
        return Exit::numeric;
    }
}

Exit run_command_file(const std::string& command, const std::filesystem::path& config,
                      const std::filesystem::path& out_dir, const RunOptions& opt, std::ostream& err) {
    json cfg = json::object();
    if (!config.empty()) {
        std::ifstream in(config);
        if (!in) {
            log(err, LogLevel::quiet, "validation error: config: cannot open '" + config.string() + "'");
            return Exit::validation;
        }
        try {
            cfg = json::parse(in);
        } catch (const json::exception& e) {
            log(err, LogLevel::quiet, std::string("validation error: config: ") + e.what());
            return Exit::validation;
        }
    }
    return run_command(command, cfg, out_dir, opt, err);
}

std::string data_formats_markdown() {
    return R"(# Data formats

Generated by `hdid formats`. All CSV files have a header row, comma separators and no quoting.
Floating-point values are written with 17 significant digits so they read back bit-identically.
Complex numbers in JSON are `[re, im]` pairs; a plain number means a real value. Angles are in
radians in [-pi, pi).

## Invocation

    hdid <command> [--config PATH] [--out DIR] [--seed N] [--threads N]

Commands: certify, design, separation, kakutani, simulate, fit, experiment, measure. `hdid formats
--out DIR` writes this file. `HD_LOG` sets verbosity (`quiet`, `warn`, `info`, `debug`). Exit status
0 means success, 2 a validation error (the message names the field), 3 a numeric failure.

Every run writes `effective_config.json` (the config with every default filled in; rerunning with
it reproduces the run) and `result.json` (`command`, `status` and command-specific fields).

## Config blocks

The config is one JSON object. `schema_version` must be 1. Keys a command does not read are
rejected.

| block | fields |
|---|---|
| `set` | `type`: `full_circle`, `arcs` (`arcs`: [[start, length], ...]), `cantor` (`base`: [start, length], `ratio` in (0, 1/2), `depth` <= 20), `points` (`angles`) |
| `gauge` | `type`: `power` (`exponent`), `tlog`, `table` (`points`: [[t, h], ...]) |
| `plan` | `scheme`: `dyadic` (`levels`, `density_factor`), `radial_ray` (`anchor_angles`, `radii`), `single_ray` (`count`) |
| `model` | `type`: `stock` (`index` 0..6), `taylor` (`coefficients`), `rational` (`numerator`, `denominator`), `blaschke` (`zeros`, `constant`) |
| `noise` | `type`: `gaussian` (`sigma`), `uniform_disk` (`radius`), `grid` (`cell_width`, `n`, `weights` row-major), `none` |
| `fit` | `degree`, `lambda`, `alpha`, `validation_fraction` |

Stock models: 0 `z`; 1 `1 + 0.5z^2 - 0.2z^6`; 2 `0.3 - 0.4z^3`; 3 `1/(1 - 0.5z)`;
4 `(0.2 + z)/(1 + 0.3z^2)`; 5 Blaschke product with zeros {0.5, -0.3i}; 6 Blaschke product with
zero 0.7e^{i} and constant e^{0.4i}.

| command | top-level keys |
|---|---|
| certify | `set`, `gauge`, `content_mode` (`exact_dp`, `greedy`, `brute_force`), `threshold`, `capacity` (`enabled`, `alpha`, `grid_points`, `kernel`) |
| design | `set`, `plan`, `coverage_grid` |
| separation | `set`, `plan`, `models` (array of model blocks), `prefix` (0 = whole plan) |
| kakutani | `noise`, `ladder`, and either `gaps` (`scale`, `exponent`, `count`: d_k = scale k^exponent) or `set`, `plan`, `models` (two) |
| simulate | `set`, `plan`, `model`, `noise`, `seed` |
| fit | `fit`, and either `observations` (path to an observations CSV) or `set`, `plan`, `model`, `noise`, `seed` |
| experiment | `set`, `plan`, `model`, `noise`, `fit`, `ladder`, `seed`, `replicates` (seeds seed..seed+replicates-1), `negative_control` |
| measure | `model`, `alpha`, `quadrature` (`radial_nodes`, `angular_nodes`, `singularity_refinement_depth`), `boundary_samples` |

## CSV tables

| file | command | columns |
|---|---|---|
| `cover.csv` | certify | `first,count,hull,cost`: one row per covering arc, the hull of `count` consecutive pieces starting at piece `first` |
| `probe.csv` | certify | `j,t,q`: t = 2^-j and q = h(t) / (t log(1/t)) |
| `capacity_weights.csv` | certify | `theta,weight`: equilibrium weight per grid cell center |
| `plan.csv` | design | `index,re,im`: sampling points in order |
| `coverage.csv` | design | `theta,count,in_target`: Stolz-region hits per grid angle |
| `levels.csv` | design | `level,sum`: sum of 1 - abs(z) per dyadic level |
| `pairs.csv` | separation | `i,j,verdict,slope,final_sum,identically_zero` |
| `factors.csv` | kakutani | `k,re_gap,im_gap,log_factor`: per-observation gap and log affinity (`-inf` for disjoint supports) |
| `ladder.csv` | kakutani | `n,log_partial,partial` |
| `observations.csv` | simulate | `n,re_z,im_z,re_x,im_x` |
| `coefficients.csv` | fit | `j,re,im`: fitted Taylor coefficients |
| `cells.csv` | experiment | `n,seed,ok,degree,sup_error,coefficient_error,boundary_sup_error`: one row per (N, seed) cell, N-major. `sup_error` is over 8 radii 0.7k/8 by 64 angles; `boundary_sup_error` over 256 angles on \|z\| = 0.95 (diagnostic) |
| `summary.csv` | experiment | `n,median_sup_error,median_coefficient_error,median_boundary_sup_error` |
| `negative_control.csv` | experiment | `plan,n,rss_true,rss_alternative,relative_gap,separating,separation,kakutani` |
| `trace.csv` | measure | `theta,re,im`: boundary samples |

`fit` reads observations in the `observations.csv` layout. Boundary functions read and write the
`trace.csv` layout.

## JSON documents

`plan.json` (design): `scheme`, scheme parameters, `target` (a `set` block), `size`, `points`.
`result.json` fields per command:

- certify: `pieces`, `total_length`, `gauge`, `admissible` (`yes`, `no`, `unknown`), `content`,
  `content_mode`, `exact_content`, `threshold`, `pass`, `hypotheses_met`, `cover_runs`,
  optional `capacity`.
- design: `size`, `scheme`, `tail_condition`, `coverage`, `blaschke_sum`.
- separation: `plan_size`, `prefix`, `pairs`, `divergent_pairs`.
- kakutani: `ladder`, `log_partial`, `partial`, `classification`
  (`orthogonal-evidence`, `equivalent-evidence`, `inconclusive`), `noise`.
- simulate: `size`, `model`, `noise`, `seed`.
- fit: `degree`, `coefficients`, `residual_norm`, `penalty`, `validation_curve`, `observations`,
  `sup_error` when the data were simulated.
- experiment: `ladder`, `seeds`, `median_sup_error`, `median_coefficient_error`,
  `median_boundary_sup_error`, `slope`, `failed_cells`, `failures`, `negative_control`.
- measure: `model`, `alpha`, `dirichlet_energy`, `dirichlet_energy_quadrature`, `besov`,
  `maximal_function_max`.
)";
}

}  // namespace hdisk::cli
