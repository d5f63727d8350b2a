#pragma once

#include <json.hpp>

#include "qnslab/qnorms.hpp"

namespace qnslab {

/// Projected nonlinear term P div(u (x) v): pseudospectral product with
/// 2/3-rule dealiasing, spectral divergence, divergence-free projection.
SpectralField nonlinear_flux(const SpectralField& u, const SpectralField& v);

/// Pressure diagnostic (-Lap)^{-1} div div (u (x) u); eliminated from the
/// mild formulation by the projection, reconstructed only on request.
SpectralField pressure_field(const SpectralField& u);

/// Duhamel integral B(u,v)(t_m) = int_0^{t_m} exp(-(t_m - s)A) P div(u (x) v) ds
/// per mode, exact exponential factor per cell against linear-in-s data.
/// The recurrence form reuses B(t_{m-1}); the direct form re-sums every cell
/// (kept as the cross-check path).
std::vector<SpectralField> bilinear_B(const std::vector<SpectralField>& u,
                                      const std::vector<SpectralField>& v, const TimeGrid& tg,
                                      const FracParams& p);
std::vector<SpectralField> bilinear_B_direct(const std::vector<SpectralField>& u,
                                             const std::vector<SpectralField>& v,
                                             const TimeGrid& tg, const FracParams& p);

struct SolverState {
    std::vector<SpectralField> slices;           // u at the time nodes
    std::vector<SpectralField> linear_slices;    // exp(-tA) P a
    int iterations = 0;
    std::vector<double> increment_norms;         // |u^{j+1} - u^j|_X
    std::vector<double> contraction_ratios;
    bool contracting = true;                     // all observed ratios < 1
    bool outside_small_data_regime = false;
    bool projected_initial = false;
    double max_divergence_residual = 0.0;
    bool converged = false;
};

/// Picard iteration u^{j+1} = u^0 - B(u^j, u^j) with increments tracked in
/// their own bilinear form, so contraction ratios stay measurable far below
/// the roundoff floor of the full iterate.
SolverState picard_solve(const SpectralField& a, const TimeGrid& tg, const FracParams& p,
                         int j_max, double tol, const BallFamily& balls);

struct ResidualReport {
    std::vector<double> node_rel_mild;  // local Duhamel defect per interior node
    std::vector<double> node_rel_fd;    // centered-difference strong residual (diagnostic)
    double max_interior_mild = 0.0;
};
/// include_nonlinear = false checks the pure semigroup evolution
ResidualReport residual(const std::vector<SpectralField>& slices, const TimeGrid& tg,
                        const FracParams& p, bool include_nonlinear = true);

/// weighted-L2 ratio of A(t) = int_0^t e^{-(t-s)A} (-Lap)^beta f ds against f
double maximal_regularity_check(const std::vector<SpectralField>& f, const TimeGrid& tg,
                                const FracParams& p);

struct Le5Report {
    double lhs = 0.0;
    double carleson_A = 0.0;
    double mass = 0.0;     // int int |N| dx ds / s^{alpha/beta}
    double fitted_b = 0.0;  // lhs / (A * mass)
};
Le5Report le5_inequality_check(const HalfSpaceSample& N, const FracParams& p, int k,
                               const BallFamily& balls);

/// weighted-L2 ratio of P_r f = int_0^t e^{-(t-s)A}(t^{1/2b}-s^{1/2b})^r |grad|^{r+2b} f ds
double pr_operator_check(const std::vector<SpectralField>& f, const TimeGrid& tg,
                         const FracParams& p, int r);

struct RegularityRow {
    int k = 0;
    double n_inf = 0.0;
    double n_carleson = 0.0;
    double ratio_inf = 0.0;       // against |a|_{Q^{beta,-1}}
    double ratio_carleson = 0.0;
};
struct RegularityTable {
    double data_norm = 0.0;  // |a|_{Q^{beta,-1}}
    std::vector<RegularityRow> linear_rows;
    std::vector<RegularityRow> solution_rows;  // empty when no solution given
};
RegularityTable linear_part_regularity(const SpectralField& a, const SolverState* solved,
                                       const TimeGrid& tg, const FracParams& p, int k_max,
                                       const BallFamily& balls);

/// empirical smallness threshold: bisection on the data amplitude for the
/// largest scale at which the first six contraction ratios stay below one
double find_smallness_threshold(const SpectralField& a_unit, const TimeGrid& tg,
                                const FracParams& p, const BallFamily& balls,
                                int bisection_steps = 10);

nlohmann::ordered_json run_manifest(const SolverState& state, const TimeGrid& tg,
                                    const FracParams& p);

}  // namespace qnslab
