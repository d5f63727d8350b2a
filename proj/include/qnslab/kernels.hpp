#pragma once

#include <string>
#include <vector>

#include "qnslab/field.hpp"

namespace qnslab {

/// Radial slice of a convolution kernel, with quadrature error estimates.
struct RadialProfile {
    std::vector<double> radii;
    std::vector<double> values;
    std::vector<double> abs_error;
    int n = 0;
    double beta = 1.0;
    double t = 1.0;
    int deriv_order = 0;
    int j = -1, l = -1;  // tensor component, -1 for the scalar heat kernel
};

/// Dissipation kernel K_t(x) with symbol exp(-t |xi|^{2 beta}), evaluated by
/// radial Fourier inversion with oscillatory-panel quadrature.
RadialProfile heat_kernel_profile(int n, double beta, double t, const std::vector<double>& radii,
                                  double abs_tol = 1e-10);

/// Total mass of K_t over R^n: numeric integral on [0, r_cut] plus the
/// analytic power-tail series from the symbol's expansion at xi = 0.
double kernel_total_mass(int n, double beta, double t);

/// Tensor kernel with symbol xi_j xi_l |xi|^{-2} exp(-t |xi|^{2 beta}),
/// evaluated along the ray direction e_j (j == l) or (e_j + e_l)/sqrt(2).
/// deriv_order 0 gives the kernel, 1 its radial derivative along the ray.
RadialProfile oseen_kernel_profile(int n, double beta, double t, int j, int l, int deriv_order,
                                   const std::vector<double>& radii, double abs_tol = 1e-10);

/// Isotropic/anisotropic split K_{jl}(x) = delta_{jl} a(r) + x_j x_l / r^2 b(r).
struct OseenRadialParts {
    std::vector<double> radii, a, b;
};
OseenRadialParts oseen_radial_parts(int n, double beta, double t, const std::vector<double>& radii,
                                    double abs_tol = 1e-10);

struct DecayEnvelopeReport {
    double beta = 0.0;
    int k_max = 0;
    std::vector<double> M;        // M_k, k = 0..k_max
    std::vector<double> M_root;   // M_k^{1/k}, k = 1..k_max
    double fitted_C = 0.0;        // max_k M_k^{1/k}
    double root_ratio = 0.0;      // max/min of M_k^{1/k}
};

/// Weighted sup of the k-th axis derivative of the projected gradient kernel
/// on a fine periodized grid: M_k = sup_x |d^k T(x)| (k^{-1/2b} + |x|)^{n+1} / k^{k/2b}.
/// T is the fixed tensor component P_{11} d_2 K_1 in two dimensions.
DecayEnvelopeReport decay_envelope_check(int k_max, double beta, std::size_t grid_n = 512,
                                         double box = 40.0);

/// Periodize a radial kernel profile onto a torus grid by direct image sums.
/// `images` is the number of image shells per axis.
std::vector<double> periodized_kernel_samples(const TorusGrid& grid, double beta, double t,
                                              int images, double abs_tol = 1e-12);

/// Convolve a field with sampled kernel values (physical-measure convolution).
SpectralField convolve_with_samples(const SpectralField& f, const std::vector<double>& kernel_samples);

void write_profile_csv(const std::string& path, const RadialProfile& p);

}  // namespace qnslab
