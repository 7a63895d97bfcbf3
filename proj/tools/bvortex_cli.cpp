#include <iostream>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"

#include "bvortex/workbench.hpp"

namespace wb = bvortex::workbench;

int main(int argc, char** argv) {
    CLI::App app{"Boundary vortex workbench: renormalized energies, layer solutions and boundary-reaction solves"};
    app.set_version_flag("--version", std::string(bvortex::version));

    std::string config_path, out_dir, log_level = "info";
    int threads = 1;
    app.add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory (overrides output_dir in the config)");
    app.add_option("--threads", threads, "Worker threads for grids and radii")->check(CLI::PositiveNumber);
    app.add_option("--log-level", log_level, "Logging threshold")
        ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

    app.fallthrough();
    app.add_subcommand("landscape", "W on a parameter grid and its isolated local minimizers");
    app.add_subcommand("solve", "Newton solve from the glued layer initial guess");
    app.add_subcommand("branch", "Continuation in eps with stability tracking");
    app.add_subcommand("verify", "Run verification suites; exit 4 on failure");
    app.add_subcommand("layer", "Half-Laplacian layer profile");
    app.add_subcommand("cf", "Layer energy constant C_f");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : wb::config_error;
    }

    auto logger = spdlog::stderr_color_mt("bvortex");
    logger->set_level(spdlog::level::from_str(log_level));
    logger->set_pattern("[%l] %v");

    wb::RunConfig cfg;
    try {
        cfg = wb::load_config(config_path);
    } catch (const bvortex::Error& e) {
        logger->error("{}", e.what());
        return wb::config_error;
    }

    wb::Options opt;
    opt.out_dir = out_dir;
    opt.threads = threads;
    opt.log = [&](wb::Level l, const std::string& msg) {
        switch (l) {
        case wb::Level::debug: logger->debug("{}", msg); break;
        case wb::Level::info: logger->info("{}", msg); break;
        case wb::Level::warn: logger->warn("{}", msg); break;
        case wb::Level::error: logger->error("{}", msg); break;
        }
    };
    return wb::run_command(app.get_subcommands().front()->get_name(), cfg, opt);
}
