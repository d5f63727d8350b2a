#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace qnslab {

/// One assertion of an acceptance suite: the measured value, its frozen
/// threshold, and the comparison outcome.
struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string comparison = "<=";
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    double seconds = 0.0;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    nlohmann::ordered_json to_json() const;
};

/// suite names, in acceptance order
const std::vector<std::string>& suite_names();

/// run one named suite ("all" runs every suite in order)
std::vector<SuiteResult> run_suites(const std::string& name, int threads = 1);

std::string render_table(const std::vector<SuiteResult>& results);

}  // namespace qnslab
