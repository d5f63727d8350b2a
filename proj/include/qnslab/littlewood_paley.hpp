#pragma once

#include "qnslab/field.hpp"

namespace qnslab {

/// Dyadic frequency decomposition. The base window lives on {1/2 < |xi| <= 2}
/// and the normalized windows Psi_j = phi_j / sum_j phi_j form a partition of
/// unity on every nonzero grid frequency inside the covered annuli.
class LittlewoodPaleyBank {
  public:
    explicit LittlewoodPaleyBank(const TorusGrid& grid);

    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }

    /// normalized window Psi_hat_j at radial frequency rho
    double window(int j, double rho) const;
    /// unnormalized base bump phi_0(2^{-j} rho)
    static double base_window(double rho);

    SpectralField block(const SpectralField& f, int j) const;

    /// homogeneous Besov norm over the available levels. p, q in [1,inf]
    /// encoded with p <= 0 meaning infinity. L^p integrals use the rectangle
    /// rule on physical samples.
    double besov_norm(const SpectralField& f, double s, double p, double q) const;

    double lp_norm(const SpectralField& f, double p) const;

  private:
    TorusGrid grid_;
    int j_min_;
    int j_max_;
};

}  // namespace qnslab
