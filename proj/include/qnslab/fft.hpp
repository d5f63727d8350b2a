#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qnslab {

/// FFTW-backed c2c transforms, normalized so that
///   samples(x_j) = sum_k coeffs(k) exp(i xi_k . x_j).
/// forward: samples -> coeffs (divides by N^n); inverse: coeffs -> samples.
/// Plans are cached per (dim, N) and guarded by a mutex; execution is
/// re-entrant on caller-owned buffers.
void fft_forward(int dim, std::size_t n_axis, std::complex<double>* data);
void fft_inverse(int dim, std::size_t n_axis, std::complex<double>* data);

}  // namespace qnslab
