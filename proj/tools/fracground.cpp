// fracground <command> --config FILE [--out DIR] [--jobs N] [--seed S]
#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "fracground/cli.hpp"
#include "fracground/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Ground states of fractional Schroedinger equations"};
    std::string command, config_path, out_dir;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t seed = 0;

    std::string names;
    for (const auto& c : fracground::cli::commands()) names += (names.empty() ? "" : ", ") + c;
    app.add_option("command", command, "one of: " + names)->required();
    app.add_option("-c,--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
    app.add_option("-o,--out", out_dir, "output directory (default: $FRACGROUND_OUT, then the config's output key)");
    app.add_option("-j,--jobs", jobs, "worker threads for sweeps and multi-start")->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
    CLI11_PARSE(app, argc, argv);

    fracground::RunConfig rc;
    try {
        rc = fracground::load_run_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    if (seed_opt->count() > 0) rc.seed = seed;
    if (out_dir.empty())
        if (const char* env = std::getenv("FRACGROUND_OUT")) out_dir = env;

    fracground::cli::Options opt;
    opt.out_dir = out_dir;
    opt.jobs = jobs;
    return fracground::cli::run(command, rc, opt);
}
