#pragma once

#include "qnslab/field.hpp"

namespace qnslab {

/// Geometric time grid 0 < t_1 < ... < t_M = T with per-cell exact weights
/// for integrals of t^{-gamma} against node data.
class TimeGrid {
  public:
    static TimeGrid geometric(double horizon, std::size_t nodes, double ratio);
    /// geometric grid with a prescribed smallest node
    static TimeGrid geometric_from(double t_min, double horizon, std::size_t nodes);

    double horizon() const { return horizon_; }
    double ratio() const { return ratio_; }
    std::size_t size() const { return nodes_.size(); }
    double node(std::size_t i) const { return nodes_[i]; }
    const std::vector<double>& nodes() const { return nodes_; }

    /// cell edges around each node (geometric Voronoi); edge(0) = 0 and
    /// edge(M) = T. For weight exponents gamma >= 1 the first cell must be
    /// truncated at the node's own lower geometric edge (recorded by callers).
    double lower_edge(std::size_t i, double gamma) const;
    double upper_edge(std::size_t i) const;

    /// exact integral of t^{-gamma} over cell i clipped to [0, s_max]
    double weight(std::size_t i, double gamma, double s_max) const;

    /// refined grid: geometric midpoints inserted, same horizon
    TimeGrid refined() const;

  private:
    double horizon_ = 1.0;
    double ratio_ = 1.3;
    std::vector<double> nodes_;
};

/// Values F(t_i, x_j) on the product of a TimeGrid and a TorusGrid.
/// Carrier for tent-space functions, Carleson integrands and solver slices.
class HalfSpaceSample {
  public:
    HalfSpaceSample(TimeGrid tgrid, TorusGrid sgrid, int components, bool nonneg = false);

    static HalfSpaceSample from_fields(const TimeGrid& tg, const std::vector<SpectralField>& slices);

    const TimeGrid& tgrid() const { return tgrid_; }
    const TorusGrid& sgrid() const { return sgrid_; }
    int components() const { return components_; }
    bool nonneg() const { return nonneg_; }
    void set_nonneg(bool v) { nonneg_ = v; }

    double& at(std::size_t it, int comp, std::size_t ix) {
        return values_[(it * static_cast<std::size_t>(components_) + static_cast<std::size_t>(comp)) * sgrid_.total() + ix];
    }
    double at(std::size_t it, int comp, std::size_t ix) const {
        return values_[(it * static_cast<std::size_t>(components_) + static_cast<std::size_t>(comp)) * sgrid_.total() + ix];
    }
    /// squared vector magnitude at a sample
    double mag2(std::size_t it, std::size_t ix) const {
        double s = 0.0;
        for (int c = 0; c < components_; ++c) s += sqr(at(it, c, ix));
        return s;
    }

    std::vector<double>& raw() { return values_; }
    const std::vector<double>& raw() const { return values_; }

    double max_abs() const;

  private:
    TimeGrid tgrid_;
    TorusGrid sgrid_;
    int components_;
    bool nonneg_;
    std::vector<double> values_;
};

/// Heat extension u(t_i) = exp(-t_i (-Lap)^beta) f as physical samples.
HalfSpaceSample heat_extension(const SpectralField& f, const TimeGrid& tg, double beta);

/// Convolution-family window given by its Fourier symbol; phi_t has symbol
/// symbol(t * xi), which encodes phi_t(x) = t^{-n} phi(x/t) exactly.
struct Window {
    std::string name;
    std::function<cplx(const std::array<double, 3>&, int)> symbol;
};

/// canonical window d_j K_1: symbol i xi_j exp(-|xi|^{2 beta})
Window canonical_window(double beta, int j);

struct WindowCertificate {
    bool mean_zero = false;
    bool integrable = false;
    double envelope_constant = 0.0;
    bool envelope_ok = false;
    bool pass() const { return mean_zero && integrable && envelope_ok; }
};

/// numeric admissibility checks of a window on a reference grid
WindowCertificate validate_window(const Window& w, int n, double envelope_cap = 1e4);

/// samples of f * phi_t at the given scale
SpectralField window_convolve(const SpectralField& f, const Window& w, double t);

}  // namespace qnslab
