#pragma once

#include "qnslab/qnorms.hpp"

namespace qnslab {

/// tent over a ball: {(t,y): |y - x_B| <= r - t}
bool in_tent(const TorusGrid& g, const Ball& b, double t, std::size_t ix);

/// sup over balls of |B|^{-1+2(a+b-1)/n} int_{T(B)} |F|^2 dt dy / t^{1+2(a-b+1)}
NormReport t_infty_norm(const HalfSpaceSample& F, const FracParams& p, const BallFamily& balls);

/// nontangential maximal function N(F)(x) = sup_{|y-x|<t} |F(t,y)|
std::vector<double> nontangential_max(const HalfSpaceSample& F);

/// greedy dyadic cover (largest gain per cost first) and inscribed-cube lower bound
struct CapacityResult {
    DyadicCover upper;
    double lower = 0.0;
};
CapacityResult hausdorff_capacity(const TorusGrid& g, const std::vector<bool>& set, double d);

/// exact minimal dyadic-cover cost by dynamic programming on the cube tree
/// (the exhaustive reference the greedy bound is tested against)
double dyadic_capacity_exact(const TorusGrid& g, const std::vector<bool>& set, double d);

/// layer-cake integral against the dyadic capacity (greedy upper bounds,
/// left-edge lambda rule: exact on plateau functions, monotone)
double choquet_integral(const TorusGrid& g, const std::vector<double>& f, double d,
                        int lambda_levels = 64);

/// both sides of the capacitary embedding plus the measure norm
struct CapacitaryEmbeddingReport {
    double lhs = 0.0;        // int |f| d mu
    double measure_norm = 0.0;  // |||mu|||_{d/n}
    double rhs = 0.0;        // int N(f) d Lambda_d
    double ratio = 0.0;      // lhs / (measure_norm * rhs)
};
CapacitaryEmbeddingReport carleson_embedding_check(const HalfSpaceSample& mu,
                                                   const HalfSpaceSample& f, double d,
                                                   const CubeFamily& cubes);

/// tent atom: values supported in T(B) with the scale-weighted square integral
/// bounded by |B|^{-1+2(a+b-1)/n}
struct TentAtom {
    Ball ball;
    HalfSpaceSample values;
    double norm_value = 0.0;  // the computed square integral V
};

struct AtomCertificate {
    bool support_ok = false;
    double support_leak = 0.0;
    double norm_value = 0.0;
    double norm_budget = 0.0;
    double margin = 0.0;  // budget / value
    bool pass() const { return support_ok && norm_value <= norm_budget * (1.0 + 1e-10); }
};
AtomCertificate validate_atom(const TentAtom& a, const FracParams& p);

struct AtomicDecomposition {
    std::vector<double> lambdas;
    std::vector<TentAtom> atoms;
    double lambda_l1 = 0.0;
    double reconstruction_residual = 0.0;  // relative to |F|
    double max_cover_cost_ratio = 0.0;     // cover cost / exact capacity, worst level
    std::vector<AtomCertificate> certificates;
};

/// constructive decomposition from the level sets of N(omega): dyadic covers,
/// boxes S*(I) with height 2 diam(I), regions T_{j,k} claimed top level first.
AtomicDecomposition atomic_decompose(const HalfSpaceSample& F, const HalfSpaceSample& omega,
                                     const FracParams& p);

/// proof-style weight for a tent atom: kappa r^{-n+2(a+b-1)} min{1, (r/dist)^{n-2(a+b-1)+eps}}
HalfSpaceSample atom_proof_weight(const TimeGrid& tg, const TorusGrid& g, const Ball& b,
                                  const FracParams& p, double eps);
/// t-independent weight from a power of the nontangential maximum of F
HalfSpaceSample nt_power_weight(const HalfSpaceSample& F, double power);

struct T1Bracket {
    double upper = 0.0;
    double lower = 0.0;
    std::size_t best_candidate = 0;
    std::size_t best_test = 0;
};
/// certified upper bound (best admissible weight candidate) and duality lower
/// bound (best pairing against T-infinity test functions)
T1Bracket t1_norm_bracket(const HalfSpaceSample& F, const FracParams& p,
                          const std::vector<HalfSpaceSample>& omega_candidates,
                          const std::vector<HalfSpaceSample>& g_tests, const BallFamily& balls);

/// pairing int F g dt dy / t with the truncated first cell (weight exponent 1)
double tent_pairing(const HalfSpaceSample& F, const HalfSpaceSample& G);

}  // namespace qnslab
