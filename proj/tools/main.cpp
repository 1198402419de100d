#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qtoken/errors.hpp"
#include "qtoken/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Quantum token simulator: cavity design, storage channel and acceptance rates"};
    app.set_version_flag("--version", qtoken::version);
    app.require_subcommand(1);

    cli::Common common;
    app.add_option("--config", common.config_path, "Scenario file (INI sections)");
    app.add_option("--set", common.overrides, "Override, section.key=value")->take_all();
    app.add_option("--out", common.out_dir, "Directory for CSV/SVG output");

    auto* table = app.add_subcommand("security-table", "Smallest token size per threshold");
    std::vector<double> thresholds{1e-4, 1e-5, 1e-6};
    double alpha = 0.75;
    table->add_option("--p-th", thresholds, "Thresholds")->expected(0, -1)->delimiter(',');
    table->add_option("--alpha", alpha, "Single-qubit cloning probability");

    auto* optc = app.add_subcommand("optimize-cavity", "Standard or robust cavity optimization");
    bool robust = false;
    int grid = 21;
    double kspan = 4.0, dspan = 4.0;
    optc->add_flag("--robust", robust, "Maximize the region-averaged fidelity");
    optc->add_option("--grid", grid, "Landscape points per axis")->check(CLI::PositiveNumber);
    optc->add_option("--span-kappa", kspan, "Landscape kappa span, GHz");
    optc->add_option("--span-delta", dspan, "Landscape delta span, GHz");

    auto* sw = app.add_subcommand("sweep", "Acceptance rate along one axis");
    cli::SweepArgs sa;
    sw->add_option("--axis", sa.axis, "Axis")
        ->required()
        ->check(CLI::IsMember({"bandwidth", "efficiency", "length", "storage", "diffusion"}));
    sw->add_option("--from", sa.from, "First value")->required();
    sw->add_option("--to", sa.to, "Last value")->required();
    sw->add_option("--points", sa.points, "Number of points")->check(CLI::PositiveNumber);
    sw->add_flag("--log", sa.log_spacing, "Logarithmic spacing");
    sw->add_flag("--svg", sa.svg, "Also write an SVG plot");

    auto* mc = app.add_subcommand("mc-verify", "Monte Carlo check of the acceptance probability");
    unsigned long long trials = 1000000, seed = 1;
    mc->add_option("--trials", trials, "Trials")->check(CLI::PositiveNumber);
    mc->add_option("--seed", seed, "Master seed");

    auto* chk = app.add_subcommand("check", "Compare against the embedded reference values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::config_error;
    }

    try {
        if (*table) return cli::security_table(common, thresholds, alpha);
        if (*optc) return cli::optimize_cavity(common, robust, grid, kspan, dspan);
        if (*sw) return cli::sweep(common, sa);
        if (*mc) return cli::mc_verify(common, trials, seed);
        if (*chk) return cli::check(common);
    } catch (const qtoken::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::config_error;
    } catch (const qtoken::DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::config_error;
    } catch (const qtoken::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return cli::numerical_failure;
    }
    return cli::ok;
}
