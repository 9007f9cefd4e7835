// Acceptance harness: runs every criterion, prints one pass/fail line per
// criterion, and exits nonzero if any fails.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "svfa/acceptance.hpp"

int main(int argc, char** argv) {
    svfa::acceptance::Options opts;
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--fast") == 0) {
            opts.fast = true;
        } else if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc) {
            opts.jobs = std::atoi(argv[++i]);
        } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only.push_back(std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: %s [--fast] [--jobs N] [--only ID]...\n", argv[0]);
            return 2;
        }
    }
    if (const char* env = std::getenv("SVFAPPROX_SEED")) opts.seed = static_cast<unsigned>(std::atoi(env));

    auto results = svfa::acceptance::run(opts, only);
    std::fputs(svfa::acceptance::format_report(results).c_str(), stdout);
    bool ok = svfa::acceptance::all_passed(results);
    std::printf("%s (%zu criteria)\n", ok ? "ALL PASS" : "FAILURES PRESENT", results.size());
    return ok ? 0 : 1;
}
