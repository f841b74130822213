#pragma once

// Batch entry points behind the CLI subcommands.

#include <iosfwd>
#include <string>

namespace hopfflow {

// flow-run: integrate per config, write trajectory CSV, snapshots, optional
// mesh checks and a machine-readable summary. Returns the process exit code.
int cmd_flow_run(const std::string& config_path, std::ostream& out, std::ostream& err);

// curve-info: full diagnostic pass over a snapshot (energies, bounds,
// modulus); optionally writes the report as JSON.
int cmd_curve_info(const std::string& snapshot_path, const std::string& json_out,
                   std::ostream& out, std::ostream& err);

// torus-check: lift, torus build and all identity checks; writes the
// per-identity residual table.
int cmd_torus_check(const std::string& snapshot_path, int fiber_res,
                    const std::string& report_out, std::ostream& out, std::ostream& err);

}  // namespace hopfflow
