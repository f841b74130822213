// Acceptance suite driver: runs every criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion.

#include <iostream>

#include "hopfflow/acceptance.hpp"

int main(int argc, char** argv) {
    const std::string out_dir = argc > 1 ? argv[1] : "acceptance_out";
    const auto results = hopfflow::run_acceptance(out_dir, std::cout);
    int failures = 0;
    for (const auto& r : results)
        if (!r.pass) ++failures;
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all " << results.size() << " criteria passed\n";
    return 0;
}
