// Command-line front end: one subcommand per experiment family, a JSON
// config for everything tunable, and pass/fail wired to the exit code
// (0 all checks passed, 1 some check failed, 2 bad input or internal error).
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "contactlab/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"contactlab: certified numerical experiments on contact "
                 "charts, flows, lifts, and isotopy costs"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    double tol = 0.0;
    auto* opt_config =
        app.add_option("--config", config_path, "JSON config file")
            ->check(CLI::ExistingFile);
    auto* opt_seed = app.add_option("--seed", seed, "override the RNG seed");
    auto* opt_out = app.add_option("--out", out_dir,
                                   "directory for run-<command>.json and CSV artifacts");
    auto* opt_tol = app.add_option("--tol", tol, "override the base tolerance");

    auto* sub_coiso = app.add_subcommand(
        "coisotropy", "classify the fixture catalog and check flow invariance");
    auto* sub_brackets = app.add_subcommand(
        "brackets", "bracket identities, naturality, and the cone lift identity");
    auto* sub_flows = app.add_subcommand(
        "flows", "Hamiltonian fields, conformal factors, and integrator checks");
    auto* sub_lifts = app.add_subcommand(
        "lifts", "cone and circle-bundle lifts with their correspondence checks");
    auto* sub_norms = app.add_subcommand(
        "norms", "cost certificates, circle lower bounds, and the k-family table");
    app.add_subcommand("all", "every suite in sequence"); // same as no subcommand

    CLI11_PARSE(app, argc, argv);

    try {
        contactlab::ExperimentConfig config =
            opt_config->count() ? contactlab::ExperimentConfig::from_file(config_path)
                                : contactlab::ExperimentConfig{};
        if (opt_seed->count()) config.seed = seed;
        if (opt_out->count()) config.out_dir = out_dir;
        if (opt_tol->count()) {
            if (!(tol > 0.0))
                throw contactlab::InputError("--tol must be positive");
            config.tol = tol;
        }

        contactlab::RunReport report;
        if (sub_coiso->parsed()) report = contactlab::cmd_coisotropy(config);
        else if (sub_brackets->parsed()) report = contactlab::cmd_brackets(config);
        else if (sub_flows->parsed()) report = contactlab::cmd_flows(config);
        else if (sub_lifts->parsed()) report = contactlab::cmd_lifts(config);
        else if (sub_norms->parsed()) report = contactlab::cmd_norms(config);
        else report = contactlab::cmd_all(config);

        contactlab::print_report(std::cout, report);
        contactlab::write_run_files(report, config.out_dir);
        return report.pass() ? 0 : 1;
    } catch (const contactlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
