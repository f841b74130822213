#pragma once

// Flat key=value run configuration: documented keys only, unknown keys are
// rejected with the offending name.

#include <cstdint>
#include <string>
#include <vector>

#include "hopfflow/curve.hpp"
#include "hopfflow/flow.hpp"

namespace hopfflow {

struct RunConfig {
    // Initial curve.
    std::string family;            // latitude | perturbed_great_circle | lissajous | from_file
    double theta = 1.0471975511965976;  // latitude polar angle
    double epsilon = 0.05;
    std::vector<int> modes = {2};
    std::uint64_t seed = 1;
    int freq_a = 2, freq_b = 1;
    double phase = 0.0;
    double amplitude = 0.9;
    std::string curve_path;

    FlowConfig flow;

    // Outputs.
    std::string output_dir = "out";
    int snapshot_every = 0;  // samples between curve snapshots, 0 = final only

    // Verification toggles.
    bool verify_hopf = false;
    bool verify_evolution = false;
    bool verify_moduli = true;
    int fiber_res = 64;
};

// Parses the documented flat key=value format; throws ConfigError naming any
// unknown or malformed key.
RunConfig parse_run_config(const std::string& path);
RunConfig parse_run_config_text(const std::string& text);

DiscreteCurve build_initial_curve(const RunConfig& config);

std::string run_config_schema();  // documented key list, for --help and errors

}  // namespace hopfflow
