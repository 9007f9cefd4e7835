#ifndef SVFA_ACCEPTANCE_HPP
#define SVFA_ACCEPTANCE_HPP

#include <span>
#include <string>
#include <vector>

namespace svfa::acceptance {

struct Options {
    bool fast = false;     ///< reduced grids/n for a quick smoke pass
    int jobs = 0;          ///< 0 = hardware concurrency
    unsigned seed = 20240817;
    /// Test fixture: scales the metadata beta bound of the kernels used
    /// by the suite, to exercise the failure path. 1.0 in normal runs.
    double beta_bound_scale = 1.0;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

/// Runs the acceptance criteria (all of them, or the ids in `only`) and
/// returns one result per criterion in id order.
std::vector<CriterionResult> run(const Options& opts, std::span<const int> only = {});

bool all_passed(const std::vector<CriterionResult>& results);

/// One line per criterion: "C07 jump-point-limit: PASS (1.23 s) detail".
std::string format_report(const std::vector<CriterionResult>& results);

}  // namespace svfa::acceptance

#endif  // SVFA_ACCEPTANCE_HPP
