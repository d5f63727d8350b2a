// Acceptance gate: runs every verification suite and prints one pass/fail
// line per criterion. Exit code 0 only when every check in every suite holds
// at its frozen tolerance.

#include <cstdio>

#include "qnslab/suites.hpp"
#include "qnslab/util.hpp"

int main() {
    using namespace qnslab;
    const auto& names = suite_names();
    bool all_pass = true;
    int idx = 0;
    for (const auto& name : names) {
        ++idx;
        std::vector<SuiteResult> rs;
        try {
            rs = run_suites(name, resolve_threads());
        } catch (const std::exception& e) {
            std::printf("[FAIL] %2d. %-18s exception: %s\n", idx, name.c_str(), e.what());
            all_pass = false;
            continue;
        }
        const SuiteResult& r = rs.front();
        std::string worst_check;
        for (const auto& c : r.checks)
            if (!c.pass && worst_check.empty()) worst_check = c.name;
        if (r.pass()) {
            std::printf("[PASS] %2d. %-18s %zu checks  (%.2f s)\n", idx, name.c_str(),
                        r.checks.size(), r.seconds);
        } else {
            std::printf("[FAIL] %2d. %-18s first failing check: %s  (%.2f s)\n", idx, name.c_str(),
                        worst_check.c_str(), r.seconds);
            for (const auto& c : r.checks)
                if (!c.pass)
                    std::printf("        %s: %g %s %g  %s\n", c.name.c_str(), c.value,
                                c.comparison.c_str(), c.threshold, c.detail.c_str());
            all_pass = false;
        }
    }
    std::printf(all_pass ? "acceptance: all criteria passed\n"
                         : "acceptance: FAILURES present\n");
    return all_pass ? 0 : 1;
}
