// Command-line front end for the blind-spot experiments.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "blindspot/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Blind-spot probability experiments under correlated obstacle blocking"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::string> config_path;
    std::vector<std::pair<std::string, std::optional<std::string>>> flags = {
        {"seed", {}}, {"workers", {}}, {"reps", {}}, {"out", {}}, {"kv", {}},
        {"mean_obstacles", {}}, {"L_over_R", {}}, {"mean_anchors", {}},
        {"obstacle_counts", {}}, {"mu", {}}, {"tol", {}}, {"R", {}},
    };

    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--seed", flags[0].second, "base seed (u64)");
    app.add_option("--workers", flags[1].second, "worker threads, 0 for all cores");
    app.add_option("--reps", flags[2].second, "Monte-Carlo replications per point");
    app.add_option("--out", flags[3].second, "output CSV path (default stdout)");
    app.add_option("--kv", flags[4].second, "visible anchors needed");
    app.add_option("--mean-obstacles", flags[5].second, "lambda0 pi R^2");
    app.add_option("--L-over-R", flags[6].second, "L/R grid: a,b,c or start:stop:step");
    app.add_option("--mean-anchors", flags[7].second, "lambda pi R^2 grid");
    app.add_option("--obstacle-counts", flags[8].second, "lambda0 pi R^2 grid for gamma");
    app.add_option("--mu", flags[9].second, "blind-spot threshold for design");
    app.add_option("--tol", flags[10].second, "design tolerance");
    app.add_option("--R", flags[11].second, "disc radius");

    const std::pair<const char*, const char*> modes[] = {
        {"sweep-l", "b versus L/R (MC, independent, nearest-two)"},
        {"sweep-lambda", "b versus lambda pi R^2 for several L/R"},
        {"gamma", "far-obstacle share of the shadowed area"},
        {"design", "anchor intensity meeting b <= mu"},
        {"estimate", "all estimators at single points"},
    };
    for (const auto& [name, help] : modes) app.add_subcommand(name, help);

    CLI11_PARSE(app, argc, argv);

    try {
        blindspot::ExperimentConfig cfg;
        if (config_path) blindspot::load_config_file(cfg, *config_path);
        cfg.mode = blindspot::parse_mode(app.get_subcommands().front()->get_name());
        if (const char* env = std::getenv("BLINDSPOT_WORKERS"); env && *env) {
            blindspot::apply_setting(cfg, "workers", env);
        }
        for (const auto& [key, value] : flags) {
            if (value) blindspot::apply_setting(cfg, key, *value);
        }
        blindspot::run_experiment(cfg);
    } catch (const std::exception& e) {
        std::cerr << "blindspot: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
