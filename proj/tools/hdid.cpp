#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "hdisk/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Boundary-uniqueness and noisy identification toolkit for analytic functions on the unit disk"};
    app.require_subcommand(1, 1);

    std::string config;
    std::string out = "out";
    std::uint64_t seed = 0;
    int threads = 0;
    hdisk::cli::RunOptions opt;

    for (const auto& name : hdisk::cli::command_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " command");
        sub->add_option("--config", config, "JSON run configuration");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--seed", seed, "override the configured seed");
        sub->add_option("--threads", threads, "worker thread cap");
    }
    auto* formats = app.add_subcommand("formats", "write DATA_FORMATS.md");
    formats->add_option("--out", out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto* sub = app.get_subcommands().front();
    if (sub == formats) {
        std::filesystem::create_directories(out);
        std::ofstream f(std::filesystem::path(out) / "DATA_FORMATS.md");
        f << hdisk::cli::data_formats_markdown();
        return f ? 0 : 2;
    }
    if (sub->count("--seed")) opt.seed = seed;
    if (sub->count("--threads")) opt.threads = threads;
    return static_cast<int>(hdisk::cli::run_command_file(sub->get_name(), config, out, opt, std::cerr));
}
