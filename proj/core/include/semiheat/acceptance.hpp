#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace semiheat {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Runs the full acceptance suite at the desk-scale defaults (N=3, p=5,
/// lambda=0.5, Gaussian(0.1, 2), r_max=16, 1024 nodes, dt=1e-3, s_max=8),
/// printing one pass/fail line per criterion to `out`.
std::vector<CriterionResult> run_acceptance(std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace semiheat
