// Command-line driver: flow runs, curve diagnostics, Hopf-torus checks and
// the full verification suite.

#include <CLI11.hpp>

#include <iostream>

#include "hopfflow/acceptance.hpp"
#include "hopfflow/errors.hpp"
#include "hopfflow/run_config.hpp"
#include "hopfflow/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Degenerate elastic-energy flow on spherical curves and its Hopf-torus lift"};
    app.require_subcommand(1);

    std::string config_path;
    auto* flow_run = app.add_subcommand("flow-run", "integrate the flow per config file");
    flow_run->add_option("config", config_path, "key=value config file")->required();

    std::string snapshot_path, info_json;
    auto* curve_info = app.add_subcommand("curve-info", "diagnostics for a curve snapshot");
    curve_info->add_option("snapshot", snapshot_path, "curve snapshot file")->required();
    curve_info->add_option("--json", info_json, "also write the report as JSON");

    std::string torus_snapshot, torus_report;
    int fiber_res = 64;
    auto* torus_check = app.add_subcommand("torus-check", "Hopf-torus identity residuals");
    torus_check->add_option("snapshot", torus_snapshot, "curve snapshot file")->required();
    torus_check->add_option("--fiber-res", fiber_res, "fiber resolution M")->default_val(64);
    torus_check->add_option("--report", torus_report, "write the residual table here");

    std::string verify_config;
    auto* verify_all = app.add_subcommand("verify-all", "run the full verification suite");
    verify_all->add_option("config", verify_config,
                           "config file (only output.dir is consulted)");

    auto* schema = app.add_subcommand("config-help", "print the config key reference");

    CLI11_PARSE(app, argc, argv);

    try {
        if (flow_run->parsed())
            return hopfflow::cmd_flow_run(config_path, std::cout, std::cerr);
        if (curve_info->parsed())
            return hopfflow::cmd_curve_info(snapshot_path, info_json, std::cout, std::cerr);
        if (torus_check->parsed())
            return hopfflow::cmd_torus_check(torus_snapshot, fiber_res, torus_report, std::cout,
                                             std::cerr);
        if (schema->parsed()) {
            std::cout << hopfflow::run_config_schema();
            return 0;
        }
        if (verify_all->parsed()) {
            std::string out_dir = "verify_out";
            if (!verify_config.empty())
                out_dir = hopfflow::parse_run_config(verify_config).output_dir;
            const auto results = hopfflow::run_acceptance(out_dir, std::cout);
            for (const auto& r : results)
                if (!r.pass) return 1;
            return 0;
        }
    } catch (const hopfflow::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
