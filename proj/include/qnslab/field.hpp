#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qnslab/grid.hpp"
#include "qnslab/util.hpp"

namespace qnslab {

/// Fourier-side representation of an m-component field on a TorusGrid.
/// Coefficients are stored component-major, flat-indexed by wavevector, in
/// the normalized convention f(x) = sum_k c_k exp(i xi_k . x).
class SpectralField {
  public:
    SpectralField(TorusGrid grid, int components, bool is_real = true);

    static SpectralField from_samples(const TorusGrid& grid, int components,
                                      const std::vector<double>& samples);
    static SpectralField from_complex_samples(const TorusGrid& grid, int components,
                                              const std::vector<cplx>& samples);

    const TorusGrid& grid() const { return grid_; }
    int components() const { return components_; }
    bool is_real() const { return is_real_; }
    void set_real(bool r) { is_real_ = r; }

    cplx& coeff(int comp, std::size_t flat) { return coeffs_[static_cast<std::size_t>(comp) * grid_.total() + flat]; }
    const cplx& coeff(int comp, std::size_t flat) const {
        return coeffs_[static_cast<std::size_t>(comp) * grid_.total() + flat];
    }
    std::vector<cplx>& raw() { return coeffs_; }
    const std::vector<cplx>& raw() const { return coeffs_; }

    /// physical samples, component-major, row-major within each component
    std::vector<double> to_physical() const;
    std::vector<cplx> to_physical_complex() const;

    /// apply a scalar Fourier multiplier m(flat index) to every component
    void apply_multiplier(const std::function<cplx(std::size_t)>& m);

    SpectralField component(int comp) const;

    // arithmetic
    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double c);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double c, SpectralField a) { return a *= c; }

    /// largest relative Hermitian-symmetry defect max|c(-k) - conj(c(k))| / max|c|
    double hermitian_defect() const;
    /// zero the k=0 coefficient of every component
    void zero_mean();

    double l2_norm() const;        // sqrt of the physical-measure L2 integral
    double linf_norm() const;      // max over physical samples (vector magnitude)
    double coeff_max() const;      // max |c_k| over components and modes

    /// spectral inner product sum_k conj(a_k).b_k summed over components
    cplx dot(const SpectralField& o) const;

  private:
    TorusGrid grid_;
    int components_;
    bool is_real_;
    std::vector<cplx> coeffs_;
};

/// QNSF container: magic "QNSF", version u32, then n, N, m, L as float64,
/// then m*N^n float64 little-endian physical samples in row-major order.
void write_qnsf(const std::string& path, const SpectralField& field);
SpectralField read_qnsf(const std::string& path);

}  // namespace qnslab
