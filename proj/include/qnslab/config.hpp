#pragma once

#include <map>
#include <string>
#include <vector>

#include "qnslab/grid.hpp"

namespace qnslab {

/// Flat sectioned key=value experiment configuration. Unknown keys are
/// rejected; grid and exponent constraints are revalidated at load.
struct ExperimentConfig {
    // [grid]
    int n = 1;
    std::size_t N = 64;
    double L = 2.0 * PI;
    // [params]
    double alpha = 0.3;
    double beta = 0.8;
    double T = 1.0;
    // [family]
    std::uint64_t seed = 1618;
    int count = 20;
    double spectrum_slope = 1.5;
    bool divergence_free = false;
    // [suite]
    std::string suite_name = "all";
    std::map<std::string, double> tolerances;  // named per-check overrides
    // [output]
    std::string out_dir = "out";
    std::vector<std::string> formats = {"json"};

    void validate() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace qnslab
