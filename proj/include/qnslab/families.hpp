#pragma once

#include <array>
#include <vector>

#include "qnslab/grid.hpp"

namespace qnslab {

/// Axis-parallel cube, center on the grid, side an integer number of cells.
struct Cube {
    std::array<double, 3> center{{0.0, 0.0, 0.0}};
    double side = 0.0;
};

/// Ball with grid center.
struct Ball {
    std::array<double, 3> center{{0.0, 0.0, 0.0}};
    double radius = 0.0;
};

/// Discretized sup over cubes: dyadic sidelengths L/2^j, all cubes inside the
/// central half of the box, l(I) <= L/4, closed under the doubling map
/// x -> 2x where both images fit.
class CubeFamily {
  public:
    static CubeFamily central(const TorusGrid& grid, int level_min = 2, int level_max = -1,
                              int offsets_per_axis = 3);
    /// close = false builds a paired subfamily of a larger scaling-closed
    /// family (used when comparing a family against its dyadic mirror).
    static CubeFamily from_cubes(const TorusGrid& grid, std::vector<Cube> cubes, bool close = true);

    const TorusGrid& grid() const { return grid_; }
    const std::vector<Cube>& cubes() const { return cubes_; }
    std::size_t size() const { return cubes_.size(); }

    CubeFamily shifted(const std::array<long, 3>& shift) const;

    /// grid sample indices of cube: x_d in [c_d - l/2, c_d + l/2)
    std::vector<std::size_t> samples(const Cube& c) const;

    void close_under_doubling();

  private:
    explicit CubeFamily(const TorusGrid& g) : grid_(g) {}
    void validate() const;
    TorusGrid grid_;
    std::vector<Cube> cubes_;
};

/// Discretized sup over balls: geometric radii up to L/4, centers on a
/// coarse sublattice of the central half.
class BallFamily {
  public:
    static BallFamily central(const TorusGrid& grid, int n_radii = 4, int centers_per_axis = 3,
                              double r_min_factor = 1.0 / 16.0);
    static BallFamily from_balls(const TorusGrid& grid, std::vector<Ball> balls);

    const TorusGrid& grid() const { return grid_; }
    const std::vector<Ball>& balls() const { return balls_; }
    std::size_t size() const { return balls_.size(); }

    /// grid sample indices with |x - center| < r (no wrap: balls fit the box)
    const std::vector<std::size_t>& samples(std::size_t ball_index) const;

  private:
    explicit BallFamily(const TorusGrid& g) : grid_(g) {}
    void build_samples();
    TorusGrid grid_;
    std::vector<Ball> balls_;
    std::vector<std::vector<std::size_t>> samples_;
};

/// One dyadic cube: level l (side = L / 2^l), per-axis index in [0, 2^l).
struct DyadicCube {
    int level = 0;
    std::array<long, 3> index{{0, 0, 0}};

    double side(const TorusGrid& g) const { return g.period() / std::pow(2.0, level); }
    bool contains(const DyadicCube& other) const;
    bool operator<(const DyadicCube& o) const {
        if (level != o.level) return level < o.level;
        return index < o.index;
    }
    bool operator==(const DyadicCube& o) const { return level == o.level && index == o.index; }
};

/// A dyadic cover with its l^d cost.
struct DyadicCover {
    std::vector<DyadicCube> cubes;
    double cost = 0.0;
    std::string covered_set_id;
};

std::vector<std::size_t> dyadic_cube_samples(const TorusGrid& g, const DyadicCube& c);

}  // namespace qnslab
