// stablesim — deterministic simulator for a price-stabilized proof-of-work
// currency: block production, reward re-adjustment, coinage-based
// depreciation, and an agent-based market around all of it.
//
//   stablesim <scenario> --config run.cfg --seed 42 --out results/
//   stablesim --list

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "stablesim/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"deterministic stabilized-currency simulator"};
    app.get_formatter()->column_width(28);

    std::string scenario, config_path, out_dir = "out";
    long long seed = -1;
    bool list = false;

    app.add_option("scenario", scenario, "scenario to run (see --list)");
    app.add_option("-c,--config", config_path, "key=value config file");
    app.add_option("-s,--seed", seed, "RNG seed (overrides config)");
    app.add_option("-o,--out", out_dir, "output directory (default: out)");
    app.add_flag("-l,--list", list, "list scenarios and exit");

    CLI11_PARSE(app, argc, argv);

    if (list) {
        for (const auto& s : stablesim::list_scenarios())
            std::printf("%-18s %s\n", s.name.c_str(), s.description.c_str());
        return 0;
    }
    if (scenario.empty()) {
        std::fprintf(stderr, "error: no scenario given (try --list)\n");
        return 2;
    }

    try {
        stablesim::ConfigMap cfg;
        if (!config_path.empty()) cfg = stablesim::ConfigMap::parse_file(config_path);
        if (seed >= 0) cfg.set("seed", std::to_string(seed));
        stablesim::run_scenario(scenario, cfg, out_dir);
        std::printf("ok: %s -> %s\n", scenario.c_str(), out_dir.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
