#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hdisk/cli.hpp"
#include "hdisk/errors.hpp"

using namespace hdisk;
using hdisk::io::json;
namespace fs = std::filesystem;

namespace {

fs::path tmp(const std::string& name) {
    const fs::path p = fs::path(HDISK_TEST_TMP) / name;
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

cli::Exit run(const std::string& cmd, const json& cfg, const fs::path& out, std::string* err = nullptr,
              cli::RunOptions opt = {}) {
    std::ostringstream es;
    const auto code = cli::run_command(cmd, cfg, out, opt, es);
    if (err) *err = es.str();
    return code;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("certify the full circle") {
        const auto out = tmp("certify");
        REQUIRE(run("certify", json::object(), out) == cli::Exit::ok);
        const auto r = read_json(out / "result.json");
        CHECK(r["pass"] == true);
        CHECK(r["admissible"] == "yes");
        CHECK(r["content"].get<double>() == doctest::Approx(two_pi));
        CHECK(fs::exists(out / "effective_config.json"));
        CHECK(fs::exists(out / "cover.csv"));
        CHECK(fs::exists(out / "probe.csv"));
    }

    TEST_CASE("validation errors exit with status 2 and name the field") {
        std::string err;
        CHECK(run("simulate", json::parse(R"({"noise": {"type": "gaussian", "sigma": -1}})"), tmp("bad1"), &err) ==
              cli::Exit::validation);
        CHECK(err.find("noise.sigma") != std::string::npos);
        CHECK(run("simulate", json::parse(R"({"noise": {"type": "gaussian", "sigma": 0.1, "mu": 0}})"), tmp("bad2"), &err) ==
              cli::Exit::validation);
        CHECK(err.find("noise.mu") != std::string::npos);
        CHECK(run("design", json::parse(R"({"plan": {"levels": 40}})"), tmp("bad3"), &err) == cli::Exit::validation);
        CHECK(err.find("plan.levels") != std::string::npos);
        CHECK(run("design", json::parse(R"({"bogus": 1})"), tmp("bad4"), &err) == cli::Exit::validation);
        CHECK(run("design", json::parse(R"({"schema_version": 2})"), tmp("bad5"), &err) == cli::Exit::validation);
        CHECK(run("nope", json::object(), tmp("bad6"), &err) == cli::Exit::validation);
        CHECK(run("fit", json::parse(R"({"fit": {"alpha": 1.5}})"), tmp("bad7"), &err) == cli::Exit::validation);
        CHECK(err.find("fit.alpha") != std::string::npos);
        CHECK_FALSE(fs::exists(tmp("bad1") / "result.json"));
    }

    TEST_CASE("numeric failures exit with status 3") {
        std::string err;
        const auto cfg = json::parse(R"({"set": {"type": "points", "angles": [0.1, 0.2, 0.3, 0.4]},
                                          "plan": {"scheme": "radial_ray", "anchor_angles": [0.0], "radii": [0.5, 0.5, 0.5]},
                                          "fit": {"degree": 2}})");
        CHECK(run("fit", cfg, tmp("rank"), &err) == cli::Exit::numeric);
        CHECK(err.find("rank") != std::string::npos);
    }

    TEST_CASE("experiment outputs are byte-identical across runs") {
        const auto cfg = json::parse(R"({"ladder": [50, 200], "replicates": 4, "seed": 42})");
        const auto a = tmp("exp_a"), b = tmp("exp_b");
        REQUIRE(run("experiment", cfg, a) == cli::Exit::ok);
        cli::RunOptions one_thread;
        one_thread.threads = 1;
        REQUIRE(run("experiment", cfg, b, nullptr, one_thread) == cli::Exit::ok);
        for (const char* f : {"cells.csv", "summary.csv", "negative_control.csv", "result.json", "effective_config.json"})
            CHECK(slurp(a / f) == slurp(b / f));
    }

    TEST_CASE("effective config reproduces the run") {
        const auto a = tmp("eff_a"), b = tmp("eff_b");
        REQUIRE(run("simulate", json::parse(R"({"plan": {"levels": 4}})"), a) == cli::Exit::ok);
        const auto eff = read_json(a / "effective_config.json");
        CHECK(eff["noise"]["sigma"] == 0.1);
        CHECK(eff["seed"] == 1);
        REQUIRE(run("simulate", eff, b) == cli::Exit::ok);
        CHECK(slurp(a / "observations.csv") == slurp(b / "observations.csv"));
    }

    TEST_CASE("seed override") {
        cli::RunOptions opt;
        opt.seed = 77;
        const auto a = tmp("seed_a");
        REQUIRE(run("simulate", json::parse(R"({"plan": {"levels": 3}, "seed": 5})"), a, nullptr, opt) == cli::Exit::ok);
        CHECK(read_json(a / "effective_config.json")["seed"] == 77);
        CHECK(read_json(a / "result.json")["seed"] == 77);
    }

    TEST_CASE("fit reads simulated observations") {
        const auto a = tmp("sim"), b = tmp("fit");
        REQUIRE(run("simulate", json::parse(R"({"plan": {"levels": 6}, "noise": {"type": "none"},
                                                "model": {"type": "taylor", "coefficients": [1, [0, 2], 0.5]}})"),
                    a) == cli::Exit::ok);
        json cfg{{"observations", (a / "observations.csv").string()}, {"fit", {{"degree", 4}}}};
        REQUIRE(run("fit", cfg, b) == cli::Exit::ok);
        const auto r = read_json(b / "result.json");
        CHECK(r["coefficients"][1][1].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(std::abs(r["coefficients"][3][0].get<double>()) < 1e-10);
    }

    TEST_CASE("remaining commands run") {
        CHECK(run("design", json::parse(R"({"plan": {"levels": 5}, "coverage_grid": 512})"), tmp("design")) == cli::Exit::ok);
        CHECK(run("separation", json::parse(R"({"plan": {"levels": 6}})"), tmp("sep")) == cli::Exit::ok);
        const auto k = tmp("kak");
        REQUIRE(run("kakutani", json::parse(R"({"noise": {"sigma": 0.1}, "gaps": {"exponent": -0.5, "count": 1000}})"), k) ==
                cli::Exit::ok);
        CHECK(read_json(k / "result.json")["classification"] == "orthogonal-evidence");
        CHECK(run("kakutani", json::parse(R"({"plan": {"levels": 5}, "models": [{"index": 0}, {"index": 0}]})"),
                  tmp("kak2")) == cli::Exit::ok);
        const auto m = tmp("measure");
        REQUIRE(run("measure", json::parse(R"({"model": {"type": "taylor", "coefficients": [0, 1]}, "alpha": 0.0})"), m) ==
                cli::Exit::ok);
        CHECK(read_json(m / "result.json")["dirichlet_energy"].get<double>() == doctest::Approx(pi));
        CHECK(run("certify", json::parse(R"({"set": {"type": "cantor", "depth": 6}, "capacity": {"enabled": true}})"),
                  tmp("cap")) == cli::Exit::ok);
    }

    TEST_CASE("serialization round trips") {
        const auto f = BoundaryFunction::sample([](double t) { return cplx{std::cos(3 * t) / 7.0, std::sin(t) / 3.0}; }, 64);
        std::stringstream ss;
        io::write_boundary_function_csv(ss, f);
        const auto g = io::read_boundary_function_csv(ss);
        CHECK(g.samples() == f.samples());

        const auto e = BoundarySet::arcs({Arc(0.1, 0.3), Arc(-2.0, 1.0 / 3.0)});
        const auto e2 = io::boundary_set_from_json(json::parse(io::to_json(e).dump()));
        REQUIRE(e2.segments().size() == e.segments().size());
        for (std::size_t i = 0; i < e.segments().size(); ++i) {
            CHECK(e2.segments()[i].start == e.segments()[i].start);
            CHECK(e2.segments()[i].length == e.segments()[i].length);
        }
        const auto c = BoundarySet::cantor(Arc(-0.5, 1.0), 0.25, 4);
        CHECK(io::boundary_set_from_json(io::to_json(c)).segments().size() == 16);

        std::stringstream bad("theta,re,im\n0.1,abc,0\n");
        CHECK_THROWS_AS(io::read_boundary_function_csv(bad), InvalidArgument);
        CHECK(io::fmt(0.1) == "0.10000000000000001");
    }

    TEST_CASE("format documentation covers every CSV") {
        const auto doc = cli::data_formats_markdown();
        for (const char* f : {"cover.csv", "probe.csv", "plan.csv", "coverage.csv", "levels.csv", "pairs.csv", "factors.csv",
                              "ladder.csv", "observations.csv", "coefficients.csv", "cells.csv", "summary.csv",
                              "negative_control.csv", "trace.csv", "capacity_weights.csv"})
            CHECK(doc.find(f) != std::string::npos);
    }
}
