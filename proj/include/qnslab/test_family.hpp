#pragma once

#include "qnslab/field.hpp"

namespace qnslab {

/// Deterministic pseudorandom band-limited fields: coefficient magnitude
/// |k|^{-slope} with splitmix64 phases, Hermitian-symmetric, zero mean.
struct TestFamily {
    std::uint64_t seed = 1;
    int count = 20;
    double spectrum_slope = 1.5;
    long k_max = 0;  // 0 means N/3
    bool divergence_free = false;

    SpectralField make(const TorusGrid& grid, int components, int index) const;
    std::vector<SpectralField> make_all(const TorusGrid& grid, int components) const;
};

}  // namespace qnslab
