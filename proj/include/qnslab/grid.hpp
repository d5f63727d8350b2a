#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "qnslab/util.hpp"

namespace qnslab {

/// Periodic torus [0,L)^n sampled on N^n points, N a power of two.
/// Wavevectors k with -N/2 < k_d <= N/2; physical frequency xi = 2*pi*k/L.
class TorusGrid {
  public:
    TorusGrid(int dim, std::size_t points_per_axis, double period);

    int dim() const { return dim_; }
    std::size_t n_axis() const { return n_axis_; }
    double period() const { return period_; }
    double spacing() const { return period_ / static_cast<double>(n_axis_); }
    std::size_t total() const { return total_; }

    /// signed integer wavevector component for axis index i in [0,N)
    long wavenumber(std::size_t i) const {
        long k = static_cast<long>(i);
        long n = static_cast<long>(n_axis_);
        return k <= n / 2 ? k : k - n;
    }
    double xi_of(long k) const { return 2.0 * PI * static_cast<double>(k) / period_; }

    void decode(std::size_t flat, std::array<std::size_t, 3>& idx) const {
        for (int d = dim_ - 1; d >= 0; --d) {
            idx[static_cast<std::size_t>(d)] = flat % n_axis_;
            flat /= n_axis_;
        }
    }
    std::size_t encode(const std::array<std::size_t, 3>& idx) const {
        std::size_t flat = 0;
        for (int d = 0; d < dim_; ++d) flat = flat * n_axis_ + idx[static_cast<std::size_t>(d)];
        return flat;
    }

    /// wavevector of a flat coefficient index
    void wavevector(std::size_t flat, std::array<long, 3>& k) const {
        std::array<std::size_t, 3> idx{};
        decode(flat, idx);
        for (int d = 0; d < dim_; ++d) k[static_cast<std::size_t>(d)] = wavenumber(idx[static_cast<std::size_t>(d)]);
    }
    /// |xi|^2 of a flat coefficient index
    double xi_norm2(std::size_t flat) const {
        std::array<long, 3> k{};
        wavevector(flat, k);
        double s = 0.0;
        for (int d = 0; d < dim_; ++d) s += sqr(xi_of(k[static_cast<std::size_t>(d)]));
        return s;
    }

    /// physical coordinates of a flat sample index
    void coords(std::size_t flat, std::array<double, 3>& x) const {
        std::array<std::size_t, 3> idx{};
        decode(flat, idx);
        double h = spacing();
        for (int d = 0; d < dim_; ++d) x[static_cast<std::size_t>(d)] = h * static_cast<double>(idx[static_cast<std::size_t>(d)]);
    }

    /// max |xi| representable on the grid (corner of the Nyquist cube)
    double xi_max() const {
        return 2.0 * PI * static_cast<double>(n_axis_ / 2) * std::sqrt(static_cast<double>(dim_)) / period_;
    }

    /// torus distance between grid coordinates
    double torus_dist(const std::array<double, 3>& a, const std::array<double, 3>& b) const {
        double s = 0.0;
        for (int d = 0; d < dim_; ++d) {
            double diff = std::fabs(a[static_cast<std::size_t>(d)] - b[static_cast<std::size_t>(d)]);
            diff = std::min(diff, period_ - diff);
            s += diff * diff;
        }
        return std::sqrt(s);
    }

    bool operator==(const TorusGrid& o) const {
        return dim_ == o.dim_ && n_axis_ == o.n_axis_ && period_ == o.period_;
    }
    bool operator!=(const TorusGrid& o) const { return !(*this == o); }

  private:
    int dim_;
    std::size_t n_axis_;
    double period_;
    std::size_t total_;
};

/// Exponent pair (alpha, beta) of the critical-space scale.
/// beta in (1/2,1]; beta = 1 only with the regularity flag set. alpha < beta.
/// Whether alpha+beta-1 >= 0 is recorded: tent-space and capacity operations
/// require it, the solver-side norms do not.
struct FracParams {
    double alpha = 0.3;
    double beta = 0.8;
    bool regularity_allows_beta_one = false;

    FracParams() = default;
    FracParams(double a, double b, bool allow_beta_one = false);

    bool tent_admissible() const { return alpha + beta - 1.0 >= 0.0; }
    /// capacity dimension d = n - 2(alpha+beta-1)
    double capacity_dim(int n) const { return static_cast<double>(n) - 2.0 * (alpha + beta - 1.0); }
};

}  // namespace qnslab
