#include "qnslab/grid.hpp"

namespace qnslab {

TorusGrid::TorusGrid(int dim, std::size_t points_per_axis, double period)
    : dim_(dim), n_axis_(points_per_axis), period_(period) {
    require(dim >= 1 && dim <= 3, "TorusGrid: dim must be 1, 2 or 3");
    require(is_pow2(points_per_axis) && points_per_axis >= 8,
            "TorusGrid: points_per_axis must be a power of two >= 8");
    require(period > 0.0, "TorusGrid: period must be positive");
    total_ = 1;
    for (int d = 0; d < dim_; ++d) total_ *= n_axis_;
}

FracParams::FracParams(double a, double b, bool allow_beta_one)
    : alpha(a), beta(b), regularity_allows_beta_one(allow_beta_one) {
    require(beta > 0.5, "FracParams: beta must exceed 1/2");
    if (allow_beta_one)
        require(beta <= 1.0, "FracParams: beta must lie in (1/2,1]");
    else
        require(beta < 1.0, "FracParams: beta must lie in (1/2,1) unless the regularity flag is set");
    require(alpha < beta, "FracParams: alpha must be smaller than beta");
}

}  // namespace qnslab
