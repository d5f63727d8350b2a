#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "qnslab/families.hpp"
#include "qnslab/grid.hpp"

namespace qnslab {

/// Where a discrete sup was attained.
struct Witness {
    std::string kind;  // "cube", "ball", "time", "mode", "none"
    std::array<double, 3> center{{0.0, 0.0, 0.0}};
    double scale = 0.0;  // side for cubes, radius for balls
    std::optional<double> time;
    std::string detail;
};

/// A computed norm with its witness and full parameter provenance.
struct NormReport {
    std::string norm_name;
    double value = 0.0;
    Witness witness;
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<double> horizon;
    int grid_dim = 0;
    std::size_t grid_n = 0;
    double grid_period = 0.0;
    std::vector<std::string> convention_notes;
    // quadrature block
    std::string quadrature_grid;
    bool excluded_diagonal = false;
    std::vector<std::pair<std::string, double>> rates;

    void set_grid(const TorusGrid& g) {
        grid_dim = g.dim();
        grid_n = g.n_axis();
        grid_period = g.period();
    }
    nlohmann::ordered_json to_json() const;
};

nlohmann::ordered_json witness_to_json(const Witness& w);

}  // namespace qnslab
