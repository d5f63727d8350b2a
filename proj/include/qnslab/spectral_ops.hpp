#pragma once

#include "qnslab/field.hpp"

namespace qnslab {

/// (-Laplace)^s as the multiplier |xi|^{2s}. s = 0 is the identity; for
/// s != 0 the k = 0 mode is zeroed (homogeneous-space convention, recorded
/// in reports).
SpectralField frac_laplacian(const SpectralField& f, double s);

/// exp(-t (-Laplace)^beta); t = 0 is the identity. Negative t is an error.
SpectralField heat_semigroup(const SpectralField& f, double t, double beta);

/// Divergence-free (Helmholtz-Weyl) projection u_hat -> u_hat - xi (xi.u_hat)/|xi|^2.
/// The k = 0 mode is untouched (constants are divergence-free). Requires m = n.
SpectralField leray_project(const SpectralField& u);

/// i xi_axis multiplier. The Nyquist plane k_axis = N/2 is zeroed so real
/// fields stay real.
SpectralField partial_derivative(const SpectralField& f, int axis);

SpectralField divergence(const SpectralField& u);

/// max over multi-indices of order k of the sup norm of the derivative.
double grad_tensor_norms(const SpectralField& f, int k);

/// f -> lambda^gamma f(lambda x) for dyadic lambda; mode k moves to lambda*k.
/// Errors if a nonzero coefficient would cross the Nyquist frequency.
SpectralField scaling_transform(const SpectralField& f, std::size_t lambda, double gamma);

/// 2/3-rule dealiasing: zero every mode with max_d |k_d| > N/3.
void dealias_two_thirds(SpectralField& f);

/// Resample a band-limited field onto a finer grid with the same period
/// (coefficients are copied by wavevector). n_axis must grow by a power of two.
SpectralField refine_grid(const SpectralField& f, std::size_t new_n_axis);

/// Shift field by a whole-grid offset: f(x) -> f(x - h), h = spacing * shift.
SpectralField shift_field(const SpectralField& f, const std::array<long, 3>& shift);

}  // namespace qnslab
