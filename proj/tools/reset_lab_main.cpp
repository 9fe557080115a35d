#include <cstdlib>
#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "reset_lab/commands.hpp"

int main(int argc, char** argv) {
    using namespace reset_lab::cli;

    CLI::App app{"reset-lab: simulation and stability analysis of zero-crossing reset control systems"};
    app.require_subcommand(1, 1);

    std::string scenario;
    CommandOptions opt;
    std::string out_dir = ".";
    int grid = 0;
    int k_max = 0;
    double eps = 0.0;
    std::string method;

    const std::pair<const char*, const char*> commands[] = {
        {"simulate", "simulate the hybrid system; writes trace CSV and summary JSON"},
        {"poincare", "tabulate the angle map; writes map CSV"},
        {"periodic", "find and classify periodic points; writes periodic JSON"},
        {"stability", "stability verdict; writes verdict JSON"},
        {"compare", "zero-crossing against sector resetting; writes both traces and a comparison JSON"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--scenario", scenario, "scenario JSON file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--grid", grid, "grid size (map samples, search grid or LMI tau grid)");
        sub->add_option("--kmax", k_max, "largest period searched");
        sub->add_option("--eps", eps, "LMI margin epsilon");
        sub->add_option("--method", method, "stability route")->check(CLI::IsMember({"eigen", "lmi", "ranged"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    opt.out_dir = out_dir;
    if (grid > 0) {
        opt.grid = grid;
    }
    if (k_max > 0) {
        opt.k_max = k_max;
    }
    if (eps > 0.0) {
        opt.eps = eps;
    }
    if (!method.empty()) {
        opt.method = method;
    }
    if (const char* seed = std::getenv("RESET_LAB_SEED")) {
        try {
            opt.seed = std::stoull(seed);
        } catch (const std::exception&) {
            std::cerr << "RESET_LAB_SEED must be a nonnegative integer\n";
            return kExitInvalid;
        }
    }
    return run_command(app.get_subcommands().front()->get_name(), scenario, opt, std::cout, std::cerr);
}
