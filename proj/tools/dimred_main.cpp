#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dimred/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"dimred: certified dimensional-reduction sweeps"};
    app.require_subcommand(1);

    std::string config_path, out_csv, plot_dir;
    std::int64_t seed = -1;
    int jobs = -1;
    bool check = false;

    const std::vector<std::string> models{"toy", "bo", "layer", "shell", "nsrobin"};
    for (const std::string& m : models) {
        CLI::App* sub = app.add_subcommand(m, "run the '" + m + "' sweep");
        sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_option("--out", out_csv, "output CSV path (default <model>.csv)");
        sub->add_option("--plot", plot_dir, "directory for SVG plots");
        sub->add_option("--seed", seed, "override the configured seed");
        sub->add_option("--jobs", jobs, "worker count (default: logical cores)");
        sub->add_flag("--check", check, "run the acceptance assertions; exit 2 on failure");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    const std::string model = app.get_subcommands().front()->get_name();
    try {
        dimred::cli::SweepConfig cfg = dimred::cli::parse_config_file(config_path, model);
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (jobs >= 0) cfg.jobs = jobs;
        if (check) cfg.check = true;
        if (!out_csv.empty()) cfg.out_csv = out_csv;
        if (!plot_dir.empty()) cfg.plot_dir = plot_dir;
        return dimred::cli::run_and_emit(cfg);
    } catch (const dimred::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
