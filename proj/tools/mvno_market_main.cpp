#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mvno/cli.hpp"

namespace {

int dispatch(const std::string& command, const mvno::RunConfig& config, std::ostream& out,
             std::ostream& err) {
    if (command == "solve") return mvno::cli::cmd_solve(config, out, err);
    if (command == "sweep") return mvno::cli::cmd_sweep(config, out, err);
    if (command == "game") return mvno::cli::cmd_game(config, out, err);
    return mvno::cli::cmd_verify(config, out, err);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wholesale and retail price setting for a two-operator mobile market\n"
                 "with a virtual entrant: closed-form solves, parameter sweeps, the 2x2\n"
                 "partnership game and brute-force verification."};
    app.require_subcommand(1);

    std::string config_path;
    std::string scenario;
    int leader = 0;
    std::string sweep_var;
    double sweep_from = 0;
    double sweep_to = 0;
    int sweep_steps = 0;
    int grid_resolution = 0;
    std::string out_path;
    double tolerance = 0;
    double inject = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config (market and run sections)")
            ->required();
        sub->add_option("--out", out_path, "output file (default stdout)");
        sub->add_option("--tolerance", tolerance, "comparison tolerance (default 1e-9)");
        return sub;
    };

    CLI::App* solve = add_common(app.add_subcommand("solve", "solve one scenario"));
    solve->add_option("--scenario", scenario,
                      "part-nonpart-1|part-nonpart-2|part-part-fs|part-part-ps|nonpart-nonpart");
    solve->add_option("--leader", leader, "leader for part-part-fs")->check(CLI::Range(1, 2));

    CLI::App* sweep =
        add_common(app.add_subcommand("sweep", "solve across a range of one variable"));
    sweep->add_option("--scenario", scenario, "scenario identifier");
    sweep->add_option("--leader", leader, "leader for part-part-fs")->check(CLI::Range(1, 2));
    sweep->add_option("--sweep", sweep_var, "gamma|r0|eps");
    sweep->add_option("--from", sweep_from, "sweep start");
    sweep->add_option("--to", sweep_to, "sweep end");
    sweep->add_option("--steps", sweep_steps, "number of sweep points (>= 2)");

    CLI::App* game = add_common(app.add_subcommand("game", "2x2 partnership game analysis"));
    game->add_option("--leader", leader, "leader for the two-partner cell")
        ->check(CLI::Range(1, 2));

    CLI::App* verify =
        add_common(app.add_subcommand("verify", "run every applicable oracle and KKT check"));
    verify->add_option("--grid-resolution", grid_resolution, "points per search axis");
    verify->add_option("--inject-price-error", inject,
                       "self-test hook: shift closed-form prices before comparing");
    solve->add_option("--grid-resolution", grid_resolution, "points per search axis");
    sweep->add_option("--grid-resolution", grid_resolution, "points per search axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : mvno::cli::kExitConfigError;
    }
    CLI::App* sub = app.get_subcommands().front();
    auto given = [&](const std::string& name) {
        const CLI::Option* opt = sub->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };

    mvno::RunConfig config;
    try {
        config = mvno::load_run_config(config_path);
        if (given("--scenario")) config.scenario = scenario;
        if (given("--leader")) config.leader = leader;
        if (given("--grid-resolution")) config.grid_resolution = grid_resolution;
        if (given("--tolerance")) config.tolerance = tolerance;
        if (given("--out")) config.out_path = out_path;
        if (given("--inject-price-error")) config.verify_inject = inject;
        if (given("--sweep") || given("--from") || given("--to") || given("--steps")) {
            mvno::SweepSpec spec = config.sweep.value_or(mvno::SweepSpec{});
            if (given("--sweep")) spec.variable = sweep_var;
            if (given("--from")) spec.from = sweep_from;
            if (given("--to")) spec.to = sweep_to;
            if (given("--steps")) spec.steps = sweep_steps;
            config.sweep = spec;
        }
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return mvno::cli::kExitConfigError;
    }

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (config.out_path) {
        file.open(*config.out_path, std::ios::binary);
        if (!file) {
            std::cerr << "config: cannot open output file '" << *config.out_path << "'\n";
            return mvno::cli::kExitConfigError;
        }
        out = &file;
    }

    try {
        return dispatch(sub->get_name(), config, *out, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return mvno::cli::kExitConfigError;
    }
}
