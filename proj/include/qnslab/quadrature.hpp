#pragma once

#include <functional>

namespace qnslab {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
};

/// Adaptive Gauss-Kronrod (G7/K15) on [a,b] with absolute tolerance.
/// Throws on non-convergence (depth exhaustion with error above tolerance).
QuadResult gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, int max_depth = 28);

/// Integral of f over [0,inf) where f = envelope * oscillation with the
/// oscillation changing sign roughly every pi/r. Panels are laid between
/// consecutive oscillator zeros and summed in order; when the truncation
/// budget cannot be met by the plain sum, iterated Aitken extrapolation of
/// the partial-sum tail is used. `rho_max` is where the envelope is
/// negligible; `r` the oscillation frequency (r <= 0 means no oscillation).
QuadResult oscillatory_integral(const std::function<double(double)>& f, double rho_max,
                                double r, double abs_tol);

}  // namespace qnslab
