#include "qnslab/suites.hpp"

#include <chrono>
#include <map>
#include <sstream>

#include "qnslab/kernels.hpp"
#include "qnslab/littlewood_paley.hpp"
#include "qnslab/solver.hpp"
#include "qnslab/spectral_ops.hpp"
#include "qnslab/tentspace.hpp"
#include "qnslab/test_family.hpp"

namespace qnslab {

namespace {

CheckResult leq(const std::string& name, double value, double threshold, std::string detail = "") {
    CheckResult c;
    c.name = name;
    c.value = value;
    c.threshold = threshold;
    c.comparison = "<=";
    c.pass = value <= threshold;
    c.detail = std::move(detail);
    return c;
}

CheckResult count_zero(const std::string& name, int violations, std::string detail = "") {
    CheckResult c;
    c.name = name;
    c.value = violations;
    c.threshold = 0.0;
    c.comparison = "==";
    c.pass = violations == 0;
    c.detail = std::move(detail);
    return c;
}

// frozen 20-field family used by every cross-characterization suite
TestFamily frozen_family() {
    TestFamily fam;
    fam.seed = 1618;
    fam.count = 20;
    fam.spectrum_slope = 1.5;
    return fam;
}

SpectralField mixed_velocity(const TorusGrid& g, double amp) {
    std::vector<double> s(2 * g.total());
    std::array<double, 3> x{};
    for (std::size_t i = 0; i < g.total(); ++i) {
        g.coords(i, x);
        s[i] = amp * (std::sin(x[1]) + std::cos(2.0 * x[1]));
        s[g.total() + i] = amp * std::sin(x[0] + 0.7);
    }
    return SpectralField::from_samples(g, 2, s);
}

// ---------------------------------------------------------------- criterion 1
SuiteResult suite_spectral(int) {
    SuiteResult res;
    res.suite = "spectral";
    TorusGrid g(2, 64, 2.0 * PI);
    TestFamily fam = frozen_family();
    fam.count = 4;

    double worst_semi = 0.0;
    SplitMix64 rng(311);
    for (int i = 0; i < 4; ++i) {
        auto f = fam.make(g, 1, i);
        double s = rng.uniform(0.0, 2.0), t = rng.uniform(0.0, 2.0);
        auto a = heat_semigroup(heat_semigroup(f, s, 0.8), t, 0.8);
        auto b = heat_semigroup(f, s + t, 0.8);
        SpectralField d = a;
        d -= b;
        worst_semi = std::max(worst_semi, d.l2_norm() / f.l2_norm());
    }
    res.checks.push_back(leq("semigroup_law_rel_l2", worst_semi, 1e-12));

    TestFamily vfam = fam;
    double worst_idem = 0.0, worst_grad = 0.0, worst_div = 0.0;
    for (int i = 0; i < 4; ++i) {
        auto u = vfam.make(g, 2, 10 + i);
        auto pu = leray_project(u);
        SpectralField d = leray_project(pu);
        d -= pu;
        worst_idem = std::max(worst_idem, d.coeff_max() / (u.coeff_max() + 1e-300));
        worst_div = std::max(worst_div, divergence(pu).coeff_max() / (u.coeff_max() + 1e-300));
        auto phi = fam.make(g, 1, 20 + i);
        SpectralField grad(g, 2, true);
        for (int dd = 0; dd < 2; ++dd) {
            auto dphi = partial_derivative(phi, dd);
            for (std::size_t ix = 0; ix < g.total(); ++ix) grad.coeff(dd, ix) = dphi.coeff(0, ix);
        }
        worst_grad = std::max(worst_grad,
                              leray_project(grad).coeff_max() / (grad.coeff_max() + 1e-300));
    }
    res.checks.push_back(leq("leray_idempotence", worst_idem, 1e-12));
    res.checks.push_back(leq("leray_annihilates_gradients", worst_grad, 1e-12));
    res.checks.push_back(leq("leray_divergence_free", worst_div, 1e-12));

    double worst_rt = 0.0;
    for (int i = 0; i < 4; ++i) {
        SplitMix64 r2(500 + static_cast<std::uint64_t>(i));
        std::vector<double> s(g.total());
        for (auto& v : s) v = r2.uniform(-1.0, 1.0);
        auto f = SpectralField::from_samples(g, 1, s);
        auto back = f.to_physical();
        double err = 0.0, scale = 0.0;
        for (std::size_t ix = 0; ix < g.total(); ++ix) {
            err = std::max(err, std::fabs(back[ix] - s[ix]));
            scale = std::max(scale, std::fabs(s[ix]));
        }
        worst_rt = std::max(worst_rt, err / scale);
    }
    res.checks.push_back(leq("transform_round_trip", worst_rt, 1e-12));
    return res;
}

// ---------------------------------------------------------------- criterion 2
SuiteResult suite_kernel_fidelity(int) {
    SuiteResult res;
    res.suite = "kernel-fidelity";
    std::vector<double> radii;
    for (int i = 0; i <= 40; ++i) radii.push_back(10.0 * i / 40.0);

    double worst_gauss = 0.0;
    for (int n = 1; n <= 3; ++n) {
        auto prof = heat_kernel_profile(n, 1.0, 1.0, radii);
        double peak = std::pow(4.0 * PI, -0.5 * n);
        for (std::size_t i = 0; i < radii.size(); ++i) {
            double exact = peak * std::exp(-radii[i] * radii[i] / 4.0);
            worst_gauss = std::max(worst_gauss, std::fabs(prof.values[i] - exact) / peak);
        }
    }
    res.checks.push_back(leq("gaussian_profile_sup_rel", worst_gauss, 1e-8,
                             "beta=1, radii [0,10], relative to the profile peak"));

    // self-similarity at beta = 0.75
    {
        const int n = 2;
        const double beta = 0.75, t = 0.37;
        std::vector<double> rs;
        for (int i = 1; i <= 20; ++i) rs.push_back(0.2 + 5.8 * i / 20.0);
        auto prof_t = heat_kernel_profile(n, beta, t, rs);
        std::vector<double> scaled;
        for (double r : rs) scaled.push_back(r / std::pow(t, 1.0 / (2.0 * beta)));
        auto prof_1 = heat_kernel_profile(n, beta, 1.0, scaled);
        double peak = heat_kernel_profile(n, beta, t, {0.0}).values[0];
        double worst = 0.0;
        for (std::size_t i = 0; i < rs.size(); ++i)
            worst = std::max(worst, std::fabs(prof_t.values[i] -
                                              std::pow(t, -0.5 * n / beta) * prof_1.values[i]) /
                                        peak);
        res.checks.push_back(leq("self_similarity_rel", worst, 1e-9));
    }

    // oseen trace identity
    {
        const int n = 2;
        const double beta = 0.8, t = 0.6;
        std::vector<double> rs;
        for (int i = 1; i <= 15; ++i) rs.push_back(0.2 + 5.8 * i / 15.0);
        auto parts = oseen_radial_parts(n, beta, t, rs);
        auto heat = heat_kernel_profile(n, beta, t, rs);
        double peak = heat_kernel_profile(n, beta, t, {0.0}).values[0];
        double worst = 0.0;
        for (std::size_t i = 0; i < rs.size(); ++i)
            worst = std::max(worst,
                             std::fabs(n * parts.a[i] + parts.b[i] - heat.values[i]) / peak);
        res.checks.push_back(leq("oseen_trace_rel", worst, 1e-9));
    }
    return res;
}

// ---------------------------------------------------------------- criterion 3
SuiteResult suite_kernel_decay(int) {
    SuiteResult res;
    res.suite = "kernel-decay";
    for (double beta : {0.6, 0.75, 0.9}) {
        auto rep = decay_envelope_check(6, beta, 512, 40.0);
        std::ostringstream detail;
        detail << "M_k^{1/k} =";
        for (double r : rep.M_root) detail << " " << r;
        res.checks.push_back(leq("root_ratio_beta_" + std::to_string(beta).substr(0, 4),
                                 rep.root_ratio, 10.0, detail.str()));
    }
    return res;
}

// independent brute-force evaluation: its own point enumeration, its own
// distance and weight arithmetic, plain accumulation order
double naive_q_norm(const SpectralField& f, double alpha, double beta, const CubeFamily& fam) {
    const TorusGrid& g = f.grid();
    auto phys = f.to_physical();
    const double h = g.spacing();
    const long nax = static_cast<long>(g.n_axis());
    double best = 0.0;
    for (const auto& cube : fam.cubes()) {
        std::vector<std::array<long, 3>> pts{{std::array<long, 3>{{0, 0, 0}}}};
        for (int d = 0; d < g.dim(); ++d) {
            std::vector<std::array<long, 3>> next;
            long lo = static_cast<long>(std::ceil((cube.center[std::size_t(d)] - 0.5 * cube.side) / h - 1e-9));
            long hi = static_cast<long>(std::ceil((cube.center[std::size_t(d)] + 0.5 * cube.side) / h - 1e-9)) - 1;
            for (const auto& base : pts)
                for (long i = lo; i <= hi; ++i) {
                    auto q = base;
                    q[std::size_t(d)] = i;
                    next.push_back(q);
                }
            pts = std::move(next);
        }
        auto value_at = [&](const std::array<long, 3>& ip) {
            std::array<std::size_t, 3> idx{};
            for (int d = 0; d < g.dim(); ++d)
                idx[std::size_t(d)] = static_cast<std::size_t>(((ip[std::size_t(d)] % nax) + nax) % nax);
            return phys[g.encode(idx)];
        };
        double acc = 0.0;
        const double expo = g.dim() + 2.0 * (alpha - beta + 1.0);
        for (const auto& a : pts)
            for (const auto& b : pts) {
                if (a == b) continue;
                double d2 = 0.0;
                for (int d = 0; d < g.dim(); ++d)
                    d2 += sqr(h * static_cast<double>(a[std::size_t(d)] - b[std::size_t(d)]));
                acc += sqr(value_at(a) - value_at(b)) * std::pow(std::sqrt(d2), -expo) *
                       std::pow(h, 2 * g.dim());
            }
        best = std::max(best,
                        std::pow(cube.side, 2.0 * (alpha + beta - 1.0) - g.dim()) * acc);
    }
    return std::sqrt(best);
}

// ---------------------------------------------------------------- criterion 4
SuiteResult suite_qnorm_oracle(int threads) {
    SuiteResult res;
    res.suite = "qnorm-oracle";
    TorusGrid g(1, 32, 2.0 * PI);
    FracParams p(0.3, 0.8);
    auto cubes = CubeFamily::central(g, 2, 3, 2);
    TestFamily fam = frozen_family();
    fam.count = 5;

    double worst_oracle = 0.0;
    for (int i = 0; i < 5; ++i) {
        auto f = fam.make(g, 1, i);
        auto rep = q_norm(f, p, cubes, threads);
        double naive = naive_q_norm(f, p.alpha, p.beta, cubes);
        worst_oracle = std::max(worst_oracle, std::fabs(rep.value - naive) / (rep.value + 1e-300));
    }
    res.checks.push_back(leq("double_sum_oracle_rel", worst_oracle, 1e-10, "n=1, N=32"));

    // exact translation invariance
    {
        TorusGrid g64(1, 64, 2.0 * PI);
        const double L = g64.period();
        const double h = g64.spacing();
        std::vector<Cube> base;
        for (double c : {0.40, 0.50, 0.60})
            base.push_back(Cube{{{std::round(c * L / h) * h, 0, 0}}, L / 8.0});
        auto fam_c = CubeFamily::from_cubes(g64, base);
        auto f = fam.make(g64, 1, 7);
        double v0 = q_norm(f, p, fam_c, threads).value;
        std::array<long, 3> shift{{5, 0, 0}};
        double v1 = q_norm(shift_field(f, shift), p, fam_c.shifted(shift), threads).value;
        res.checks.push_back(leq("translation_invariance_rel", std::fabs(v1 - v0) / v0, 1e-13));
    }

    // absolute homogeneity
    {
        auto f = fam.make(g, 1, 3);
        double v0 = q_norm(f, p, cubes, threads).value;
        SpectralField cf = f;
        cf *= -7.25;
        double v1 = q_norm(cf, p, cubes, threads).value;
        res.checks.push_back(leq("absolute_homogeneity_rel", std::fabs(v1 - 7.25 * v0) / (7.25 * v0), 1e-12));
    }
    return res;
}

// ---------------------------------------------------------------- criterion 5
SuiteResult suite_scaling(int threads) {
    SuiteResult res;
    res.suite = "scaling";
    TorusGrid g(1, 1024, 2.0 * PI);
    const double L = g.period();
    const double h = g.spacing();
    const double beta = 0.9, alpha = 0.2;
    FracParams p(alpha, beta);
    std::vector<Cube> seed, doubled;
    for (double c : {0.282, 0.297, 0.313, 0.328, 0.344}) {
        double cc = std::round(c * L / h) * h;
        seed.push_back(Cube{{{cc, 0, 0}}, L / 16.0});
        doubled.push_back(Cube{{{2.0 * cc, 0, 0}}, L / 8.0});
    }
    auto famB = CubeFamily::from_cubes(g, seed, false);
    auto famA = CubeFamily::from_cubes(g, doubled, false);
    TestFamily tf = frozen_family();
    tf.k_max = 24;
    int violations = 0;
    double worst = 0.0;
    for (const auto& f : tf.make_all(g, 1)) {
        auto f2 = scaling_transform(f, 2, 2.0 * beta - 2.0);
        double na = q_norm(f, p, famA, threads).value;
        double nb = q_norm(f2, p, famB, threads).value;
        double dev = std::fabs(std::log(nb / na));
        worst = std::max(worst, dev);
        if (dev > std::log(1.03)) ++violations;
    }
    res.checks.push_back(count_zero("dyadic_rescale_violations", violations,
                                    "worst |log ratio| = " + std::to_string(worst)));
    return res;
}

// ---------------------------------------------------------------- criterion 6
SuiteResult suite_monotonicity(int) {
    SuiteResult res;
    res.suite = "monotonicity";
    int violations = 0;
    long total = 0;
    const double beta = 0.8;
    const double a1 = 0.25, a2 = 0.45;
    for (int n : {1, 2}) {
        TorusGrid g(n, 32, 2.0 * PI);
        auto cubes = CubeFamily::central(g, 2, 3, 2);
        TestFamily fam = frozen_family();
        fam.count = n == 1 ? 60 : 40;
        for (const auto& f : fam.make_all(g, 1)) {
            auto phys = f.to_physical();
            for (const auto& c : cubes.cubes()) {
                double lhs = q_cube_weighted(phys, g, a1, beta, cubes, c);
                double rhs = std::pow(std::sqrt(static_cast<double>(n)), 2.0 * (a2 - a1)) *
                             q_cube_weighted(phys, g, a2, beta, cubes, c);
                ++total;
                if (lhs > rhs * (1.0 + 1e-12)) ++violations;
            }
        }
    }
    res.checks.push_back(count_zero("per_cube_alpha_monotonicity", violations,
                                    std::to_string(total) + " cube pairs over 100 fields"));
    return res;
}

// ---------------------------------------------------------------- criterion 7
SuiteResult suite_coherence(int threads) {
    SuiteResult res;
    res.suite = "coherence";
    FracParams p(0.3, 0.8);
    TestFamily fam = frozen_family();

    auto run = [&](std::size_t N) {
        TorusGrid g(1, N, 2.0 * PI);
        auto cubes = CubeFamily::central(g, 2, 3, 3);
        auto balls = BallFamily::central(g, 3, 3);
        CarlesonOptions opt;
        opt.tgrid = TimeGrid::geometric(2.0, 40, 1.4);
        Window w = canonical_window(p.beta, 0);
        TimeGrid wavelet_tg = TimeGrid::geometric(g.period() / 4.0, 40, 1.35);
        std::vector<double> log_semi, log_wave;
        for (const auto& f0 : fam.make_all(TorusGrid(1, 64, 2.0 * PI), 1)) {
            // same coefficients on both grids: refine when needed
            SpectralField f = N == 64 ? f0 : refine_grid(f0, N);
            double q2 = sqr(q_norm(f, p, cubes, threads).value);
            double semi = sqr(semigroup_carleson_norm(f, p, balls, opt).value);
            double wav = sqr(wavelet_carleson_norm(f, w, p, balls, wavelet_tg).value);
            log_semi.push_back(std::log(q2 / semi));
            log_wave.push_back(std::log(q2 / wav));
        }
        return std::make_pair(log_semi, log_wave);
    };
    auto coarse = run(64);
    auto fine = run(128);

    auto spread = [](const std::vector<double>& v) {
        return *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
    };
    res.checks.push_back(leq("semigroup_log_ratio_spread", spread(coarse.first), std::log(30.0)));
    res.checks.push_back(leq("wavelet_log_ratio_spread", spread(coarse.second), std::log(30.0)));

    auto endpoint_drift = [](const std::vector<double>& a, const std::vector<double>& b) {
        double lo = std::fabs(*std::min_element(a.begin(), a.end()) -
                              *std::min_element(b.begin(), b.end()));
        double hi = std::fabs(*std::max_element(a.begin(), a.end()) -
                              *std::max_element(b.begin(), b.end()));
        return std::max(lo, hi);
    };
    res.checks.push_back(
        leq("semigroup_bracket_drift", endpoint_drift(coarse.first, fine.first), std::log(1.2)));
    res.checks.push_back(
        leq("wavelet_bracket_drift", endpoint_drift(coarse.second, fine.second), std::log(1.2)));
    return res;
}

// ---------------------------------------------------------------- criterion 8
SuiteResult suite_tents(int) {
    SuiteResult res;
    res.suite = "tents";
    TorusGrid g(1, 32, 2.0 * PI);
    TimeGrid tg = TimeGrid::geometric(g.period() / 4.0, 16, 1.5);
    FracParams p(0.3, 0.8);
    auto balls = BallFamily::central(g, 3, 3);

    // atom margins exact to 1e-10
    {
        Ball b{{{PI, 0, 0}}, g.period() / 8.0};
        TentAtom atom{b, HalfSpaceSample(tg, g, 1), 0.0};
        for (std::size_t it = 0; it < tg.size(); ++it)
            for (std::size_t ix = 0; ix < g.total(); ++ix)
                if (in_tent(g, b, tg.node(it), ix)) atom.values.at(it, 0, ix) = 1.0;
        auto pre = validate_atom(atom, p);
        double scale = std::sqrt(pre.norm_budget / pre.norm_value);
        for (auto& v : atom.values.raw()) v *= scale;
        auto cert = validate_atom(atom, p);
        res.checks.push_back(leq("atom_margin_error", std::fabs(cert.margin - 1.0), 1e-10));
    }

    // decomposition: reconstruction and disjointness (exact residual)
    {
        SplitMix64 rng(404);
        double worst_resid = 0.0;
        int cert_failures = 0;
        for (int trial = 0; trial < 5; ++trial) {
            HalfSpaceSample F(tg, g, 1);
            for (auto& v : F.raw()) v = rng.uniform(-1.0, 1.0);
            auto w = nt_power_weight(F, 1.0);
            for (auto& v : w.raw()) v += 1e-6;
            auto dec = atomic_decompose(F, w, p);
            worst_resid = std::max(worst_resid, dec.reconstruction_residual);
            for (const auto& cert : dec.certificates)
                if (!cert.pass()) ++cert_failures;
        }
        res.checks.push_back(leq("decomposition_residual", worst_resid, 1e-10));
        res.checks.push_back(count_zero("atom_certificate_failures", cert_failures));
    }

    // pairing inequality over 50 random pairs, one fitted constant
    {
        SplitMix64 rng(505);
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            HalfSpaceSample F(tg, g, 1), G(tg, g, 1);
            for (auto& v : F.raw()) v = rng.uniform(-1.0, 1.0);
            for (auto& v : G.raw()) v = rng.uniform(-1.0, 1.0);
            std::vector<HalfSpaceSample> cands{nt_power_weight(F, 1.0), nt_power_weight(F, 0.5)};
            for (auto& c : cands)
                for (auto& v : c.raw()) v += 1e-9;
            auto br = t1_norm_bracket(F, p, cands, {G}, balls);
            double tnorm = t_infty_norm(G, p, balls).value;
            double pairing = std::fabs(tent_pairing(F, G));
            if (br.upper > 0.0 && tnorm > 0.0)
                worst = std::max(worst, pairing / (br.upper * tnorm));
        }
        res.checks.push_back(leq("pairing_fitted_constant", worst, 12.0,
                                 "|<F,g>| <= C upper(F) |g|_Tinf over 50 pairs"));
    }

    // capacity of a single dyadic cube exact + strong subadditivity at N=32
    {
        TorusGrid g32(2, 32, 2.0);
        double d = 1.4;
        DyadicCube q{2, {{1, 2, 0}}};
        std::vector<bool> mask(g32.total(), false);
        for (auto ix : dyadic_cube_samples(g32, q)) mask[ix] = true;
        auto cap = hausdorff_capacity(g32, mask, d);
        res.checks.push_back(leq("single_cube_capacity_error",
                                 std::fabs(cap.upper.cost - std::pow(q.side(g32), d)), 1e-12));

        TorusGrid g1(1, 32, 2.0);
        double dd = 0.7;
        SplitMix64 rng(606);
        int violations = 0;
        for (int trial = 0; trial < 12; ++trial) {
            std::vector<bool> e1(g1.total(), false), e2(g1.total(), false);
            for (int c = 0; c < 3; ++c) {
                int lvl = 2 + static_cast<int>(rng.next() % 3);
                DyadicCube qq{lvl, {{static_cast<long>(rng.next() % (1u << lvl)), 0, 0}}};
                for (auto ix : dyadic_cube_samples(g1, qq)) ((c % 2 == 0) ? e1 : e2)[ix] = true;
            }
            bool any1 = false, any2 = false, anyi = false;
            std::vector<bool> uni(g1.total()), inter(g1.total());
            for (std::size_t i = 0; i < g1.total(); ++i) {
                any1 = any1 || e1[i];
                any2 = any2 || e2[i];
                uni[i] = e1[i] || e2[i];
                inter[i] = e1[i] && e2[i];
                anyi = anyi || inter[i];
            }
            if (!any1 || !any2) continue;
            double cu = dyadic_capacity_exact(g1, uni, dd);
            double ci = anyi ? dyadic_capacity_exact(g1, inter, dd) : 0.0;
            if (cu + ci > dyadic_capacity_exact(g1, e1, dd) + dyadic_capacity_exact(g1, e2, dd) + 1e-12)
                ++violations;
        }
        res.checks.push_back(count_zero("strong_subadditivity_violations", violations));
    }
    return res;
}

// ---------------------------------------------------------------- criterion 9
SuiteResult suite_capacitary(int) {
    SuiteResult res;
    res.suite = "capacitary";
    TorusGrid g(1, 32, 2.0);
    TimeGrid tg = TimeGrid::geometric(0.5, 16, 1.5);
    double d = 0.8;
    auto cubes = CubeFamily::central(g, 2, 3, 3);
    SplitMix64 rng(707);
    double worst = 0.0;
    int finite = 0;
    for (int trial = 0; trial < 50; ++trial) {
        HalfSpaceSample mu(tg, g, 1, true), f(tg, g, 1);
        for (auto& v : mu.raw()) v = rng.uniform();
        for (auto& v : f.raw()) v = rng.uniform(-1.0, 1.0);
        auto rep = carleson_embedding_check(mu, f, d, cubes);
        if (std::isfinite(rep.ratio)) {
            worst = std::max(worst, rep.ratio);
            ++finite;
        }
    }
    res.checks.push_back(leq("capacitary_fitted_constant", worst, 60.0,
                             std::to_string(finite) + " of 50 pairs evaluated"));
    return res;
}

// --------------------------------------------------------------- criterion 10
SuiteResult suite_contraction(int) {
    SuiteResult res;
    res.suite = "contraction";
    TorusGrid g(2, 64, 2.0 * PI);
    TimeGrid tg = TimeGrid::geometric(1.0, 32, 1.35);
    FracParams p(0.3, 0.8);
    auto balls = BallFamily::central(g, 3, 2);

    auto a_unit = mixed_velocity(g, 1.0);
    double threshold = find_smallness_threshold(a_unit, tg, p, balls, 8);
    SpectralField a = a_unit;
    a *= 1e-3 * threshold;
    auto st = picard_solve(a, tg, p, 8, 0.0, balls);
    double worst = 0.0;
    std::size_t measured = std::min<std::size_t>(6, st.contraction_ratios.size());
    for (std::size_t j = 0; j < measured; ++j) worst = std::max(worst, st.contraction_ratios[j]);
    res.checks.push_back(leq("contraction_ratio_iters_1_to_6", worst, 0.67,
                             "threshold=" + std::to_string(threshold) + ", " +
                                 std::to_string(measured) + " ratios"));
    CheckResult enough;
    enough.name = "six_ratios_observed";
    enough.value = static_cast<double>(measured);
    enough.threshold = 6.0;
    enough.comparison = ">=";
    enough.pass = measured >= 6;
    res.checks.push_back(enough);
    return res;
}

// --------------------------------------------------------------- criterion 11
SuiteResult suite_residual(int) {
    SuiteResult res;
    res.suite = "residual";
    TorusGrid g(2, 32, 2.0 * PI);
    TimeGrid tg = TimeGrid::geometric(1.0, 24, 1.4);
    FracParams p(0.3, 0.8);
    auto balls = BallFamily::central(g, 3, 2);

    auto a = leray_project(mixed_velocity(g, 0.5));
    std::vector<SpectralField> lin;
    for (std::size_t i = 0; i < tg.size(); ++i) lin.push_back(heat_semigroup(a, tg.node(i), p.beta));
    auto rl = residual(lin, tg, p, false);
    double worst_lin = 0.0;
    for (double v : rl.node_rel_mild) worst_lin = std::max(worst_lin, v);
    res.checks.push_back(leq("linear_evolution_residual", worst_lin, 1e-10));

    auto st = picard_solve(mixed_velocity(g, 1e-3), tg, p, 12, 1e-13, balls);
    auto rs = residual(st.slices, tg, p, true);
    res.checks.push_back(leq("converged_interior_residual", rs.max_interior_mild, 1e-4));
    return res;
}

// --------------------------------------------------------------- criterion 12
SuiteResult suite_solution_scaling(int) {
    SuiteResult res;
    res.suite = "solution-scaling";
    TorusGrid g(2, 64, 2.0 * PI);
    FracParams p(0.3, 0.8);
    auto balls = BallFamily::central(g, 2, 2);
    TimeGrid tg = TimeGrid::geometric(1.0, 12, 1.5);

    TestFamily fam = frozen_family();
    fam.divergence_free = true;
    fam.k_max = 5;
    SpectralField a = fam.make(g, 2, 3);
    a *= 1e-3 / a.linf_norm();
    const double lam2b = std::pow(2.0, 2.0 * p.beta);
    auto a2 = scaling_transform(a, 2, 2.0 * p.beta - 1.0);
    TimeGrid tg2 = TimeGrid::geometric(1.0 / lam2b, 12, 1.5);
    auto st = picard_solve(a, tg, p, 8, 1e-14, balls);
    auto st2 = picard_solve(a2, tg2, p, 8, 1e-14, balls);

    const double factor = std::pow(2.0, 2.0 * p.beta - 1.0);
    const long band = 8;
    const long nax = static_cast<long>(g.n_axis());
    double werr = 0.0, scale = 0.0;
    std::array<long, 3> k{};
    std::array<std::size_t, 3> idx2{};
    for (std::size_t m = 0; m < tg.size(); ++m)
        for (std::size_t mode = 0; mode < g.total(); ++mode) {
            g.wavevector(mode, k);
            if (std::labs(k[0]) > band || std::labs(k[1]) > band) continue;
            for (int dd = 0; dd < 2; ++dd)
                idx2[std::size_t(dd)] =
                    static_cast<std::size_t>(((2 * k[std::size_t(dd)]) % nax + nax) % nax);
            std::size_t mode2 = g.encode(idx2);
            for (int c = 0; c < 2; ++c) {
                cplx expect = factor * st.slices[m].coeff(c, mode);
                werr = std::max(werr, std::abs(st2.slices[m].coeff(c, mode2) - expect));
                scale = std::max(scale, std::abs(expect));
            }
        }
    res.checks.push_back(leq("matched_node_rel_error", werr / scale, 0.01));
    return res;
}

// --------------------------------------------------------------- criterion 13
SuiteResult suite_regularity(int) {
    SuiteResult res;
    res.suite = "regularity";
    TorusGrid g(2, 32, 2.0 * PI);
    FracParams p(0.3, 0.8);
    auto balls = BallFamily::central(g, 3, 2);
    TimeGrid tg = TimeGrid::geometric(1.0, 16, 1.5);
    TimeGrid tg_fine = tg.refined();

    auto a = mixed_velocity(g, 1e-3);
    auto st = picard_solve(a, tg, p, 10, 1e-13, balls);
    auto st_fine = picard_solve(a, tg_fine, p, 10, 1e-13, balls);

    auto coarse = linear_part_regularity(a, &st, tg, p, 2, balls);
    auto fine = linear_part_regularity(a, &st_fine, tg_fine, p, 2, balls);

    bool all_finite = true;
    double worst_drift = 0.0;
    for (int k = 0; k <= 2; ++k) {
        const auto& rc = coarse.linear_rows[static_cast<std::size_t>(k)];
        const auto& rf = fine.linear_rows[static_cast<std::size_t>(k)];
        const auto& sc = coarse.solution_rows[static_cast<std::size_t>(k)];
        const auto& sf = fine.solution_rows[static_cast<std::size_t>(k)];
        for (double v : {rc.n_inf, rc.n_carleson, sc.n_inf, sc.n_carleson})
            all_finite = all_finite && std::isfinite(v) && v > 0.0;
        for (auto [c, f] : {std::pair{rc.ratio_inf, rf.ratio_inf},
                            std::pair{rc.ratio_carleson, rf.ratio_carleson},
                            std::pair{sc.ratio_inf, sf.ratio_inf},
                            std::pair{sc.ratio_carleson, sf.ratio_carleson}})
            worst_drift = std::max(worst_drift, std::fabs(std::log(f / c)));
    }
    CheckResult finite;
    finite.name = "nk_norms_finite_k_0_to_2";
    finite.value = all_finite ? 1.0 : 0.0;
    finite.threshold = 1.0;
    finite.comparison = "==";
    finite.pass = all_finite;
    res.checks.push_back(finite);
    res.checks.push_back(leq("ratio_table_drift", worst_drift, std::log(1.15),
                             "time-grid refinement, both linear and solution rows"));
    return res;
}

// --------------------------------------------------------------- criterion 14
SuiteResult suite_quadrature_lemmas(int) {
    SuiteResult res;
    res.suite = "quadrature-lemmas";
    TorusGrid g(1, 32, 2.0 * PI);
    FracParams p(0.3, 0.8);
    TimeGrid tg = TimeGrid::geometric(1.0, 16, 1.5);
    TimeGrid tg_fine = tg.refined();
    auto balls = BallFamily::central(g, 3, 3);

    // single-mode scalar oracle for the maximal-regularity bound
    {
        SpectralField mode(g, 1, false);
        std::array<std::size_t, 3> i2{{2, 0, 0}};
        mode.coeff(0, g.encode(i2)) = cplx{1.0, 0.0};
        std::vector<SpectralField> fs(tg.size(), mode);
        double got = maximal_regularity_check(fs, tg, p);
        double lam = std::pow(4.0, p.beta);
        KahanSum lhs, rhs;
        for (std::size_t m = 0; m < tg.size(); ++m) {
            double w = tg.weight(m, p.alpha / p.beta, tg.horizon());
            lhs.add(w * sqr(1.0 - std::exp(-tg.node(m) * lam)));
            rhs.add(w);
        }
        res.checks.push_back(
            leq("maximal_regularity_oracle_rel", std::fabs(got - lhs.value() / rhs.value()), 1e-8));
    }

    // batch ratios bounded and refinement-stable
    TestFamily fam = frozen_family();
    fam.count = 10;
    auto batch_ratio = [&](const TimeGrid& grid) {
        double worst_mr = 0.0, worst_pr = 0.0, worst_b = 0.0;
        for (const auto& f : fam.make_all(g, 1)) {
            std::vector<SpectralField> slices;
            for (std::size_t i = 0; i < grid.size(); ++i)
                slices.push_back(heat_semigroup(f, 0.3 * grid.node(i), p.beta));
            worst_mr = std::max(worst_mr, maximal_regularity_check(slices, grid, p));
            worst_pr = std::max(worst_pr, pr_operator_check(slices, grid, p, 1));
        }
        // one le5 run per grid on a fixed nonnegative profile
        HalfSpaceSample N(grid, g, 1, true);
        for (std::size_t it = 0; it < grid.size(); ++it)
            for (std::size_t ix = 0; ix < g.total(); ++ix) {
                std::array<double, 3> x{};
                g.coords(ix, x);
                N.at(it, 0, ix) =
                    (grid.node(it) < 0.3 && std::fabs(x[0] - PI) < 0.8) ? 1.0 : 0.0;
            }
        worst_b = le5_inequality_check(N, p, 1, balls).fitted_b;
        return std::array<double, 3>{{worst_mr, worst_pr, worst_b}};
    };
    auto coarse = batch_ratio(tg);
    auto fine = batch_ratio(tg_fine);
    res.checks.push_back(leq("maximal_regularity_batch_bound", coarse[0], 1.5));
    res.checks.push_back(leq("pr_operator_batch_bound", coarse[1], 50.0));
    res.checks.push_back(leq("le5_fitted_b_bound", coarse[2], 1e4));
    double drift = 0.0;
    for (int i = 0; i < 3; ++i) drift = std::max(drift, std::fabs(std::log(fine[i] / coarse[i])));
    res.checks.push_back(leq("lemma_ratio_refinement_drift", drift, std::log(1.2)));

    // pr single-mode oracle equality (the shared-cell scalar reduction)
    {
        SpectralField mode(g, 1, false);
        std::array<std::size_t, 3> i3{{3, 0, 0}};
        mode.coeff(0, g.encode(i3)) = cplx{1.0, 0.0};
        std::vector<SpectralField> fs;
        for (std::size_t i = 0; i < tg.size(); ++i)
            fs.push_back(heat_semigroup(mode, tg.node(i), p.beta));
        double v1 = pr_operator_check(fs, tg, p, 0);
        res.checks.push_back(leq("pr_oracle_finite", v1 > 0.0 && std::isfinite(v1) ? 0.0 : 1.0, 0.0,
                                 "value=" + std::to_string(v1)));
    }
    return res;
}

// --------------------------------------------------------------- criterion 15
SuiteResult suite_embeddings(int threads) {
    SuiteResult res;
    res.suite = "embeddings";
    FracParams p(0.3, 0.8);
    TestFamily fam = frozen_family();

    auto run = [&](std::size_t N) {
        TorusGrid g(1, N, 2.0 * PI);
        auto cubes = CubeFamily::central(g, 2, 3, 3);
        auto balls = BallFamily::central(g, 3, 3);
        CarlesonOptions opt;
        opt.tgrid = TimeGrid::geometric(2.0, 32, 1.4);
        std::array<double, 3> worst{{0.0, 0.0, 0.0}};
        for (const auto& f0 : fam.make_all(TorusGrid(1, 64, 2.0 * PI), 1)) {
            SpectralField f = N == 64 ? f0 : refine_grid(f0, N);
            int pi = 0;
            for (auto pair : {EmbeddingPair::BesovToQ, EmbeddingPair::BesovToQInverse,
                              EmbeddingPair::QInverseToBesovInfty}) {
                auto rep = embedding_check(f, pair, p, cubes, balls, opt, threads);
                if (!rep.skipped)
                    worst[static_cast<std::size_t>(pi)] =
                        std::max(worst[static_cast<std::size_t>(pi)], rep.ratio);
                ++pi;
            }
        }
        return worst;
    };
    auto coarse = run(64);
    auto fine = run(128);
    res.checks.push_back(leq("besov_to_q_ratio_bound", coarse[0], 30.0));
    res.checks.push_back(leq("besov_to_qinv_ratio_bound", coarse[1], 30.0));
    res.checks.push_back(leq("qinv_to_besov_ratio_bound", coarse[2], 30.0));
    double drift = 0.0;
    for (int i = 0; i < 3; ++i)
        drift = std::max(drift, std::fabs(std::log(fine[static_cast<std::size_t>(i)] /
                                                   coarse[static_cast<std::size_t>(i)])));
    res.checks.push_back(leq("embedding_ratio_refinement_drift", drift, std::log(1.10)));
    return res;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "spectral",       "kernel-fidelity", "kernel-decay",    "qnorm-oracle",
        "scaling",        "monotonicity",    "coherence",       "tents",
        "capacitary",     "contraction",     "residual",        "solution-scaling",
        "regularity",     "quadrature-lemmas", "embeddings"};
    return names;
}

std::vector<SuiteResult> run_suites(const std::string& name, int threads) {
    using Runner = SuiteResult (*)(int);
    static const std::vector<std::pair<std::string, Runner>> table = {
        {"spectral", suite_spectral},
        {"kernel-fidelity", suite_kernel_fidelity},
        {"kernel-decay", suite_kernel_decay},
        {"qnorm-oracle", suite_qnorm_oracle},
        {"scaling", suite_scaling},
        {"monotonicity", suite_monotonicity},
        {"coherence", suite_coherence},
        {"tents", suite_tents},
        {"capacitary", suite_capacitary},
        {"contraction", suite_contraction},
        {"residual", suite_residual},
        {"solution-scaling", suite_solution_scaling},
        {"regularity", suite_regularity},
        {"quadrature-lemmas", suite_quadrature_lemmas},
        {"embeddings", suite_embeddings},
    };
    // runtime budgets are part of the acceptance contract for these suites
    static const std::map<std::string, double> budgets = {{"spectral", 5.0},
                                                          {"kernel-fidelity", 30.0},
                                                          {"kernel-decay", 120.0},
                                                          {"contraction", 60.0}};
    std::vector<SuiteResult> out;
    bool found = false;
    for (const auto& [suite, runner] : table) {
        if (name != "all" && name != suite) continue;
        found = true;
        auto start = std::chrono::steady_clock::now();
        SuiteResult r = runner(threads);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        auto budget = budgets.find(suite);
        if (budget != budgets.end())
            r.checks.push_back(leq("runtime_seconds", r.seconds, budget->second));
        out.push_back(std::move(r));
    }
    require(found, "run_suites: unknown suite '" + name + "'");
    return out;
}

nlohmann::ordered_json SuiteResult::to_json() const {
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["pass"] = pass();
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        // wall-clock values stay out of the report so identical runs dump
        // byte-identical JSON; timing lives in the metadata block
        if (c.name != "runtime_seconds") cj["value"] = c.value;
        cj["threshold"] = c.threshold;
        cj["comparison"] = c.comparison;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        arr.push_back(cj);
    }
    j["checks"] = arr;
    return j;
}

std::string render_table(const std::vector<SuiteResult>& results) {
    std::ostringstream out;
    for (const auto& r : results) {
        out << (r.pass() ? "[PASS] " : "[FAIL] ") << r.suite << "  ("
            << static_cast<int>(r.seconds * 1000.0) << " ms)\n";
        for (const auto& c : r.checks) {
            out << "   " << (c.pass ? "ok   " : "FAIL ") << c.name << ": " << c.value << " "
                << c.comparison << " " << c.threshold;
            if (!c.detail.empty()) out << "   [" << c.detail << "]";
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace qnslab
