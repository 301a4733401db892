#include <string>

#include "CLI11.hpp"

#include "nlab/cli_commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"interpolating-sequence constructions, certificates and reports"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    const char* names[] = {"construct", "check", "peaks", "witness", "figure"};
    const char* blurbs[] = {
        "build a family, write sequence CSV and figure SVG",
        "Blaschke/Carleson/separation report for a family or CSV",
        "build all peak functions, audit them, tabulate gauges",
        "minimal-mass LP depth trace and Smirnov contradiction",
        "standalone SVG charts",
    };
    for (int i = 0; i < 5; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "output directory (default: .)");
    }

    CLI11_PARSE(app, argc, argv);
    return nlab::cli::run_command(app.get_subcommands()[0]->get_name(), config_path, out_dir);
}
