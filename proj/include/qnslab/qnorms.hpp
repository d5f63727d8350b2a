#pragma once

#include "qnslab/families.hpp"
#include "qnslab/halfspace.hpp"
#include "qnslab/report.hpp"

namespace qnslab {

/// Which radius range the horizon T constrains in Carleson-type suprema.
/// The default keeps r^{2 beta} in (0,T), matching the solution-space norm.
enum class RadiusRange { RPow2Beta, RPlain };

struct CarlesonOptions {
    TimeGrid tgrid = TimeGrid::geometric(1.0, 48, 1.35);
    RadiusRange range = RadiusRange::RPow2Beta;
    double horizon = std::numeric_limits<double>::infinity();
};

/// scale-weighted double-difference norm over the cube family
NormReport q_norm(const SpectralField& f, const FracParams& p, const CubeFamily& cubes,
                  int threads = 1);
/// translated-difference variant (offsets |y| < l(I) against the cube)
NormReport q_norm_translated(const SpectralField& f, const FracParams& p, const CubeFamily& cubes,
                             int threads = 1);

/// per-cube double integrals, exposed for the per-cube inequality tests
double q_cube_value(const std::vector<double>& phys, const TorusGrid& g, const FracParams& p,
                    const CubeFamily& fam, const Cube& cube);
double q_cube_translated_value(const std::vector<double>& phys, const TorusGrid& g,
                               const FracParams& p, const CubeFamily& fam, const Cube& cube);
/// weighted per-cube value l^{2(alpha+beta-1)-n} U(I) at given alpha
double q_cube_weighted(const std::vector<double>& phys, const TorusGrid& g, double alpha,
                       double beta, const CubeFamily& fam, const Cube& cube);

/// mean-oscillation norm sup_I |I|^{-1+4(beta-1)/n} int_I |f - f_I|^2
NormReport bmo_beta_norm(const SpectralField& f, double beta, const CubeFamily& cubes);

/// Carleson norm of the heat extension (the derivative-space norm)
NormReport carleson_q_inverse_norm(const SpectralField& f, const FracParams& p,
                                   const BallFamily& balls, const CarlesonOptions& opt);

/// semigroup characterization: same Carleson functional on |grad e^{-tA} f|
NormReport semigroup_carleson_norm(const SpectralField& f, const FracParams& p,
                                   const BallFamily& balls, const CarlesonOptions& opt);

/// solution-space norm: sup_t t^{1-1/2beta} |g|_inf plus the Carleson part
struct XNormReport {
    double value = 0.0;
    double linf_part = 0.0;
    double carleson_part = 0.0;
    Witness linf_witness;
    Witness carleson_witness;
    NormReport to_report(const FracParams& p, const TorusGrid& g, double T) const;
};
XNormReport x_norm(const HalfSpaceSample& g, const FracParams& p, const BallFamily& balls,
                   double horizon, RadiusRange range = RadiusRange::RPow2Beta);

/// k-th derivative norms of a time-indexed field
struct NkNorms {
    NormReport n_inf;
    NormReport n_carleson;
};
NkNorms nk_norms(const std::vector<SpectralField>& slices, const TimeGrid& tg,
                 const FracParams& p, int k, const BallFamily& balls);

/// square-function norm against a general admissible window (t up to r)
NormReport wavelet_carleson_norm(const SpectralField& f, const Window& phi, const FracParams& p,
                                 const BallFamily& balls, const TimeGrid& tg);

/// sup over Carleson boxes of mu(S(I)) / l(I)^{n p}
NormReport p_carleson_norm(const HalfSpaceSample& mu, double p_exp, const CubeFamily& cubes);

/// fractional Poincare chain on one cube
struct PoincareReport {
    double lhs = 0.0;          // |psi - mean|_{L2(I)}
    double mid_alpha1 = 0.0;   // n^{n/4} diam^{a1-b+1} sqrt(U(I,a1))
    double mid_alpha2 = 0.0;   // same at alpha2 (alpha1 <= alpha2)
    double grad_side = 0.0;    // diam |grad psi|_{L2(I)} (constant fitted)
    bool chain_ok = false;
    double fitted_last = 0.0;  // mid_alpha2 / grad_side
};
PoincareReport poincare_check(const SpectralField& psi, const Cube& cube, const CubeFamily& fam,
                              double alpha1, double alpha2, double beta);

/// norm ratios of the double-Riesz transforms d_j d_k (-Lap)^{-1}
struct RieszReport {
    std::vector<double> ratios;  // row-major over (j,k)
    double max_ratio = 0.0;
};
RieszReport riesz_stability_check(const SpectralField& f, const FracParams& p,
                                  const BallFamily& balls, const CarlesonOptions& opt);

/// divergence-form representation f = sum_j d_j f_j with f_j = -d_j (-Lap)^{-1} f
struct DivRepReport {
    double reconstruction_rel_error = 0.0;
    double q_inverse_norm = 0.0;
    double sum_component_q_norms = 0.0;
    double ratio = 0.0;  // q_inverse / sum
};
DivRepReport divergence_representation_check(const SpectralField& f, const FracParams& p,
                                             const CubeFamily& cubes, const BallFamily& balls,
                                             const CarlesonOptions& opt, int threads = 1);

enum class EmbeddingPair { BesovToQ, BesovToQInverse, QInverseToBesovInfty };

struct EmbeddingReport {
    bool skipped = false;
    double source_norm = 0.0;  // the larger space's norm (right side)
    double target_norm = 0.0;  // the embedded norm (left side)
    double ratio = 0.0;        // target / source
};
EmbeddingReport embedding_check(const SpectralField& f, EmbeddingPair pair, const FracParams& p,
                                const CubeFamily& cubes, const BallFamily& balls,
                                const CarlesonOptions& opt, int threads = 1);

}  // namespace qnslab
