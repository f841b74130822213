#pragma once

// The verification suite behind `verify-all` and the acceptance test binary:
// every criterion runs at its pinned tolerance and reports one line.

#include <iosfwd>
#include <string>
#include <vector>

namespace hopfflow {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs all criteria, streaming one PASS/FAIL line each to `log`; artifacts
// (trajectories, tables) go under out_dir.
std::vector<CriterionResult> run_acceptance(const std::string& out_dir, std::ostream& log);

}  // namespace hopfflow
