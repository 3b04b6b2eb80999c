// Reproducible experiment runner behind the CLI: a structured config, one
// function per subcommand, and a uniform pass/fail report.  Every check a
// command runs is named, carries the measured number and the bound it was
// held to, and is deterministic given (config, seed); CSV artifacts are
// byte-identical across reruns.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "contactlab/chart.hpp"
#include "contactlab/norms.hpp"
#include "contactlab/scalar_field.hpp"
#include "contactlab/submanifold.hpp"

namespace contactlab {

// Custom patch given as polynomial parametrizations per ambient coordinate,
// sampled on a uniform parameter grid.
struct PatchTable {
    std::string name = "custom";
    int intrinsic_dim = 0;
    std::vector<Polynomial> param;    // one per ambient coordinate
    Eigen::VectorXd grid_lo, grid_hi; // parameter box
    int grid_points = 5;              // per parameter axis
    std::vector<Polynomial> defining; // optional vanishing-ideal generators
};

SubmanifoldPatch patch_from_table(const PatchTable& table);

struct ExperimentConfig {
    std::string chart_name = "darboux:1";
    std::string fixture;                        // empty: run the whole catalog
    std::string hamiltonian = "hk:1";           // builtin spec string
    std::optional<Polynomial> hamiltonian_poly; // overrides the builtin string
    std::optional<PatchTable> patch_table;      // extra patch to classify
    std::uint64_t seed = 2024;
    double tol = 1e-8;
    double step = 1e-3;      // integrator step for single flows
    double fd_step = 1e-5;   // finite-difference step for gradients
    double flow_step = 5e-3; // integrator step for grid sweeps of flows
    int value_points = 201;
    int flow_points = 11;
    int time_steps = 32;
    std::vector<int> k_list = {1, 2, 4, 8};
    std::string out_dir; // empty: no files written

    // JSON file with nested tables; parse errors carry line:column, unknown
    // keys are rejected, and every numeric knob is checked for positivity.
    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text,
                                           const std::string& origin);

    std::string echo() const; // canonical JSON echo of every knob
    NormParams norm_params() const {
        return NormParams{value_points, flow_points, time_steps, flow_step};
    }
};

ContactChart config_chart(const ExperimentConfig& config);

// "reeb", "coordinate:<label>", "hk:<k>", "bump", "constant:<c>".
ScalarField make_builtin_field(const ContactChart& chart, const std::string& spec);
// The configured Hamiltonian: inline polynomial if given, else the builtin.
ScalarField config_field(const ExperimentConfig& config, const ContactChart& chart);

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0; // headline number of the check
    double bound = 0.0;    // what it was compared against
    std::string detail;
};

struct RunReport {
    std::string command;
    std::uint64_t seed = 0;
    std::string config_echo;
    std::vector<CheckResult> checks;
    double wall_seconds = 0.0;

    bool pass() const;
    int failed() const;
};

RunReport cmd_coisotropy(const ExperimentConfig& config);
RunReport cmd_brackets(const ExperimentConfig& config);
RunReport cmd_flows(const ExperimentConfig& config);
RunReport cmd_lifts(const ExperimentConfig& config);
RunReport cmd_norms(const ExperimentConfig& config);
RunReport cmd_all(const ExperimentConfig& config);

void print_report(std::ostream& os, const RunReport& report);
// run-<command>.json (report + config echo) under out_dir; creates the
// directory.  cmd_norms additionally writes noncomparability.csv itself.
void write_run_files(const RunReport& report, const std::string& out_dir);

} // namespace contactlab
