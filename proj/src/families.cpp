#include "qnslab/families.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qnslab {

namespace {
bool fits_central_half(const TorusGrid& g, const Cube& c) {
    const double L = g.period();
    for (int d = 0; d < g.dim(); ++d) {
        double lo = c.center[static_cast<std::size_t>(d)] - 0.5 * c.side;
        double hi = c.center[static_cast<std::size_t>(d)] + 0.5 * c.side;
        if (lo < 0.25 * L - 1e-12 || hi > 0.75 * L + 1e-12) return false;
    }
    return true;
}

bool on_grid(const TorusGrid& g, double coord) {
    double q = coord / g.spacing();
    return std::fabs(q - std::round(q)) < 1e-9;
}
}  // namespace

void CubeFamily::validate() const {
    require(!cubes_.empty(), "CubeFamily: family must be nonempty");
    const double L = grid_.period();
    const double h = grid_.spacing();
    for (const auto& c : cubes_) {
        require(c.side > 0.0 && c.side <= 0.25 * L + 1e-12, "CubeFamily: side must be <= L/4");
        double cells = c.side / h;
        require(std::fabs(cells - std::round(cells)) < 1e-9 && std::round(cells) >= 2.0,
                "CubeFamily: side must span an even number >= 2 of grid cells");
        require(fits_central_half(grid_, c), "CubeFamily: cube must fit the central half");
        for (int d = 0; d < grid_.dim(); ++d)
            require(on_grid(grid_, c.center[static_cast<std::size_t>(d)]),
                    "CubeFamily: centers must lie on the grid");
    }
}

CubeFamily CubeFamily::central(const TorusGrid& grid, int level_min, int level_max,
                               int offsets_per_axis) {
    const int lmax_grid = static_cast<int>(std::log2(static_cast<double>(grid.n_axis()))) - 2;
    if (level_max < 0) level_max = lmax_grid;
    require(level_min >= 2 && level_max <= lmax_grid && level_min <= level_max,
            "CubeFamily: levels must lie in [2, log2(N)-2]");
    const double L = grid.period();
    const double h = grid.spacing();
    CubeFamily fam(grid);
    for (int j = level_min; j <= level_max; ++j) {
        const double side = L / std::pow(2.0, j);
        std::vector<double> axis_centers;
        for (int o = 0; o < offsets_per_axis; ++o) {
            double span = 0.5 * L - side;  // admissible center interval width
            double c = 0.25 * L + 0.5 * side +
                       span * (offsets_per_axis == 1
                                   ? 0.5
                                   : static_cast<double>(o) / static_cast<double>(offsets_per_axis - 1));
            c = std::round(c / h) * h;  // snap to grid
            axis_centers.push_back(c);
        }
        std::sort(axis_centers.begin(), axis_centers.end());
        axis_centers.erase(std::unique(axis_centers.begin(), axis_centers.end()), axis_centers.end());
        std::vector<std::array<double, 3>> centers{{std::array<double, 3>{{0, 0, 0}}}};
        for (int d = 0; d < grid.dim(); ++d) {
            std::vector<std::array<double, 3>> next;
            for (const auto& base : centers)
                for (double c : axis_centers) {
                    auto p = base;
                    p[static_cast<std::size_t>(d)] = c;
                    next.push_back(p);
                }
            centers = std::move(next);
        }
        for (const auto& c : centers) fam.cubes_.push_back(Cube{c, side});
    }
    fam.close_under_doubling();
    fam.validate();
    return fam;
}

CubeFamily CubeFamily::from_cubes(const TorusGrid& grid, std::vector<Cube> cubes, bool close) {
    CubeFamily fam(grid);
    fam.cubes_ = std::move(cubes);
    if (close) fam.close_under_doubling();
    fam.validate();
    return fam;
}

void CubeFamily::close_under_doubling() {
    auto key = [](const Cube& c) {
        return std::array<double, 4>{{c.center[0], c.center[1], c.center[2], c.side}};
    };
    std::set<std::array<double, 4>> seen;
    for (const auto& c : cubes_) seen.insert(key(c));
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Cube> add;
        for (const auto& c : cubes_) {
            Cube dbl;
            for (int d = 0; d < grid_.dim(); ++d)
                dbl.center[static_cast<std::size_t>(d)] = 2.0 * c.center[static_cast<std::size_t>(d)];
            dbl.side = 2.0 * c.side;
            if (dbl.side > 0.25 * grid_.period() + 1e-12) continue;
            bool inside = fits_central_half(grid_, dbl);
            for (int d = 0; d < grid_.dim(); ++d)
                if (dbl.center[static_cast<std::size_t>(d)] >= grid_.period()) inside = false;
            if (!inside) continue;
            if (seen.insert(key(dbl)).second) {
                add.push_back(dbl);
                grew = true;
            }
        }
        cubes_.insert(cubes_.end(), add.begin(), add.end());
    }
}

CubeFamily CubeFamily::shifted(const std::array<long, 3>& shift) const {
    CubeFamily fam(grid_);
    const double h = grid_.spacing();
    for (const auto& c : cubes_) {
        Cube s = c;
        for (int d = 0; d < grid_.dim(); ++d)
            s.center[static_cast<std::size_t>(d)] += h * static_cast<double>(shift[static_cast<std::size_t>(d)]);
        fam.cubes_.push_back(s);
    }
    fam.validate();
    return fam;
}

std::vector<std::size_t> CubeFamily::samples(const Cube& c) const {
    const double h = grid_.spacing();
    std::array<long, 3> first{};
    std::array<long, 3> count{};
    for (int d = 0; d < grid_.dim(); ++d) {
        double lo = c.center[static_cast<std::size_t>(d)] - 0.5 * c.side;
        double hi = c.center[static_cast<std::size_t>(d)] + 0.5 * c.side;
        long f0 = static_cast<long>(std::ceil(lo / h - 1e-9));
        long l0 = static_cast<long>(std::ceil(hi / h - 1e-9)) - 1;  // half-open upper face
        first[static_cast<std::size_t>(d)] = f0;
        count[static_cast<std::size_t>(d)] = l0 - f0 + 1;
    }
    std::vector<std::size_t> out;
    std::array<std::size_t, 3> idx{};
    const long n = static_cast<long>(grid_.n_axis());
    std::function<void(int)> rec = [&](int d) {
        if (d == grid_.dim()) {
            out.push_back(grid_.encode(idx));
            return;
        }
        for (long i = 0; i < count[static_cast<std::size_t>(d)]; ++i) {
            long gidx = ((first[static_cast<std::size_t>(d)] + i) % n + n) % n;
            idx[static_cast<std::size_t>(d)] = static_cast<std::size_t>(gidx);
            rec(d + 1);
        }
    };
    rec(0);
    return out;
}

BallFamily BallFamily::central(const TorusGrid& grid, int n_radii, int centers_per_axis,
                               double r_min_factor) {
    const double L = grid.period();
    BallFamily fam(grid);
    for (int ir = 0; ir < n_radii; ++ir) {
        double r = L * r_min_factor *
                   std::pow((0.25 / r_min_factor), n_radii == 1 ? 0.0
                                                                : static_cast<double>(ir) /
                                                                      static_cast<double>(n_radii - 1));
        std::vector<double> axis_centers;
        for (int o = 0; o < centers_per_axis; ++o) {
            double span = 0.5 * L - 2.0 * r;
            double c = 0.25 * L + r +
                       std::max(0.0, span) *
                           (centers_per_axis == 1
                                ? 0.5
                                : static_cast<double>(o) / static_cast<double>(centers_per_axis - 1));
            c = std::round(c / grid.spacing()) * grid.spacing();
            axis_centers.push_back(c);
        }
        std::sort(axis_centers.begin(), axis_centers.end());
        axis_centers.erase(std::unique(axis_centers.begin(), axis_centers.end()),
                           axis_centers.end());
        std::vector<std::array<double, 3>> centers{{std::array<double, 3>{{0, 0, 0}}}};
        for (int d = 0; d < grid.dim(); ++d) {
            std::vector<std::array<double, 3>> next;
            for (const auto& base : centers)
                for (double c : axis_centers) {
                    auto p = base;
                    p[static_cast<std::size_t>(d)] = c;
                    next.push_back(p);
                }
            centers = std::move(next);
        }
        for (const auto& c : centers) fam.balls_.push_back(Ball{c, r});
    }
    fam.build_samples();
    return fam;
}

BallFamily BallFamily::from_balls(const TorusGrid& grid, std::vector<Ball> balls) {
    BallFamily fam(grid);
    fam.balls_ = std::move(balls);
    fam.build_samples();
    return fam;
}

void BallFamily::build_samples() {
    require(!balls_.empty(), "BallFamily: family must be nonempty");
    samples_.clear();
    const double h = grid_.spacing();
    const long n = static_cast<long>(grid_.n_axis());
    for (const auto& b : balls_) {
        require(b.radius > 0.0 && b.radius <= 0.25 * grid_.period() + 1e-12,
                "BallFamily: radius must be in (0, L/4]");
        std::vector<std::size_t> pts;
        std::array<long, 3> lo{}, hi{};
        for (int d = 0; d < grid_.dim(); ++d) {
            lo[static_cast<std::size_t>(d)] =
                static_cast<long>(std::floor((b.center[static_cast<std::size_t>(d)] - b.radius) / h)) - 1;
            hi[static_cast<std::size_t>(d)] =
                static_cast<long>(std::ceil((b.center[static_cast<std::size_t>(d)] + b.radius) / h)) + 1;
        }
        std::array<std::size_t, 3> idx{};
        std::array<long, 3> cur{};
        std::function<void(int)> rec = [&](int d) {
            if (d == grid_.dim()) {
                double r2 = 0.0;
                for (int dd = 0; dd < grid_.dim(); ++dd) {
                    double x = h * static_cast<double>(cur[static_cast<std::size_t>(dd)]);
                    r2 += sqr(x - b.center[static_cast<std::size_t>(dd)]);
                }
                if (r2 < sqr(b.radius)) {
                    for (int dd = 0; dd < grid_.dim(); ++dd)
                        idx[static_cast<std::size_t>(dd)] = static_cast<std::size_t>(
                            ((cur[static_cast<std::size_t>(dd)] % n) + n) % n);
                    pts.push_back(grid_.encode(idx));
                }
                return;
            }
            for (long i = lo[static_cast<std::size_t>(d)]; i <= hi[static_cast<std::size_t>(d)]; ++i) {
                cur[static_cast<std::size_t>(d)] = i;
                rec(d + 1);
            }
        };
        rec(0);
        samples_.push_back(std::move(pts));
    }
}

const std::vector<std::size_t>& BallFamily::samples(std::size_t ball_index) const {
    return samples_[ball_index];
}

bool DyadicCube::contains(const DyadicCube& other) const {
    if (other.level < level) return false;
    int shift = other.level - level;
    for (int d = 0; d < 3; ++d)
        if ((other.index[static_cast<std::size_t>(d)] >> shift) != index[static_cast<std::size_t>(d)])
            return false;
    return true;
}

std::vector<std::size_t> dyadic_cube_samples(const TorusGrid& g, const DyadicCube& c) {
    const long per_axis = static_cast<long>(g.n_axis()) >> c.level;
    require(per_axis >= 1, "dyadic_cube_samples: level finer than the grid");
    std::vector<std::size_t> out;
    std::array<std::size_t, 3> idx{};
    std::function<void(int)> rec = [&](int d) {
        if (d == g.dim()) {
            out.push_back(g.encode(idx));
            return;
        }
        long base = c.index[static_cast<std::size_t>(d)] * per_axis;
        for (long i = 0; i < per_axis; ++i) {
            idx[static_cast<std::size_t>(d)] = static_cast<std::size_t>(base + i);
            rec(d + 1);
        }
    };
    rec(0);
    return out;
}

}  // namespace qnslab
