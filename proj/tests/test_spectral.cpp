#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "qnslab/field.hpp"
#include "qnslab/littlewood_paley.hpp"
#include "qnslab/spectral_ops.hpp"
#include "qnslab/test_family.hpp"

using namespace qnslab;

namespace {

double rel_diff(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    d -= b;
    double scale = std::max(a.coeff_max(), b.coeff_max());
    return scale == 0.0 ? d.coeff_max() : d.coeff_max() / scale;
}

// slow direct DFT, the independent oracle for the transform pair
std::vector<cplx> naive_dft(const TorusGrid& g, const std::vector<double>& samples) {
    std::vector<cplx> out(g.total());
    std::array<long, 3> k{};
    std::array<double, 3> x{};
    for (std::size_t i = 0; i < g.total(); ++i) {
        g.wavevector(i, k);
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < g.total(); ++j) {
            g.coords(j, x);
            double phase = 0.0;
            for (int d = 0; d < g.dim(); ++d) phase -= g.xi_of(k[std::size_t(d)]) * x[std::size_t(d)];
            acc += samples[j] * std::polar(1.0, phase);
        }
        out[i] = acc / static_cast<double>(g.total());
    }
    return out;
}

}  // namespace

TEST_CASE("transform: constant field has only the DC mode") {
    TorusGrid g(2, 16, 2.0 * PI);
    std::vector<double> ones(g.total(), 1.0);
    auto f = SpectralField::from_samples(g, 1, ones);
    CHECK(std::abs(f.coeff(0, 0) - cplx{1.0, 0.0}) < 1e-13);
    double off = 0.0;
    for (std::size_t i = 1; i < g.total(); ++i) off = std::max(off, std::abs(f.coeff(0, i)));
    CHECK(off < 1e-13);
}

TEST_CASE("transform: cos(2 pi x / L) puts 1/2 on k = +-(1,0)") {
    TorusGrid g(2, 16, 2.0 * PI);
    std::vector<double> s(g.total());
    std::array<double, 3> x{};
    for (std::size_t i = 0; i < g.total(); ++i) {
        g.coords(i, x);
        s[i] = std::cos(2.0 * PI * x[0] / g.period());
    }
    auto f = SpectralField::from_samples(g, 1, s);
    std::array<std::size_t, 3> ip{{1, 0, 0}};
    std::array<std::size_t, 3> im{{15, 0, 0}};
    CHECK(std::abs(f.coeff(0, g.encode(ip)) - cplx{0.5, 0.0}) < 1e-13);
    CHECK(std::abs(f.coeff(0, g.encode(im)) - cplx{0.5, 0.0}) < 1e-13);
}

TEST_CASE("transform: round trip and direct-DFT oracle at N=8") {
    for (int n = 1; n <= 3; ++n) {
        TorusGrid g(n, 8, 1.7);
        SplitMix64 rng(42 + static_cast<std::uint64_t>(n));
        std::vector<double> s(g.total());
        for (auto& v : s) v = rng.uniform(-1.0, 1.0);
        auto f = SpectralField::from_samples(g, 1, s);

        auto oracle = naive_dft(g, s);
        double werr = 0.0;
        for (std::size_t i = 0; i < g.total(); ++i)
            werr = std::max(werr, std::abs(f.coeff(0, i) - oracle[i]));
        CHECK(werr < 1e-12);

        auto back = f.to_physical();
        double rerr = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < g.total(); ++i) {
            rerr = std::max(rerr, std::fabs(back[i] - s[i]));
            scale = std::max(scale, std::fabs(s[i]));
        }
        CHECK(rerr / scale < 1e-12);
        CHECK(f.hermitian_defect() < 1e-12);
    }
}

TEST_CASE("transform: shape mismatch is rejected") {
    TorusGrid g(1, 16, 1.0);
    std::vector<double> bad(g.total() + 1, 0.0);
    CHECK_THROWS(SpectralField::from_samples(g, 1, bad));
}

TEST_CASE("frac_laplacian: s = 0 is the identity including the mean") {
    TorusGrid g(1, 16, 2.0 * PI);
    TestFamily fam;
    auto f = fam.make(g, 1, 0);
    f.coeff(0, 0) = cplx{3.0, 0.0};
    CHECK(rel_diff(frac_laplacian(f, 0.0), f) == 0.0);
}

TEST_CASE("frac_laplacian: single mode is an eigenfunction with value |xi|^{2 beta}") {
    TorusGrid g(2, 16, 2.0 * PI);
    SpectralField f(g, 1, false);
    std::array<std::size_t, 3> ip{{3, 2, 0}};
    f.coeff(0, g.encode(ip)) = cplx{1.0, 0.0};
    double beta = 0.8;
    auto lf = frac_laplacian(f, beta);
    double xi2 = 9.0 + 4.0;
    CHECK(std::abs(lf.coeff(0, g.encode(ip)) - cplx{std::pow(xi2, beta), 0.0}) < 1e-12);
}

TEST_CASE("frac_laplacian: negative order zeroes the mean mode") {
    TorusGrid g(1, 16, 2.0 * PI);
    SpectralField f(g, 1, true);
    f.coeff(0, 0) = cplx{2.0, 0.0};
    std::array<std::size_t, 3> ip{{1, 0, 0}};
    f.coeff(0, g.encode(ip)) = cplx{0.5, 0.0};
    auto g1 = frac_laplacian(f, -0.5);
    CHECK(g1.coeff(0, 0) == cplx{0.0, 0.0});
}

TEST_CASE("frac_laplacian: beta = 1 matches the second-difference Laplacian at rate 2") {
    double beta = 1.0;
    double errs[2];
    std::size_t Ns[2] = {32, 64};
    for (int t = 0; t < 2; ++t) {
        TorusGrid g(1, Ns[t], 2.0 * PI);
        TestFamily fam;
        fam.k_max = 4;  // fixed smooth field on both grids
        auto f = fam.make(g, 1, 1);
        auto lf = frac_laplacian(f, beta);
        auto s = f.to_physical();
        auto ls = lf.to_physical();
        double h = g.spacing();
        double werr = 0.0;
        for (std::size_t i = 0; i < g.total(); ++i) {
            std::size_t l = (i + g.total() - 1) % g.total();
            std::size_t r = (i + 1) % g.total();
            double second = (s[r] - 2.0 * s[i] + s[l]) / (h * h);
            werr = std::max(werr, std::fabs(ls[i] + second));  // (-Lap) = -d2/dx2
        }
        errs[t] = werr;
    }
    double rate = std::log2(errs[0] / errs[1]);
    CHECK(rate > 1.7);
}

TEST_CASE("heat_semigroup: identity at t=0, semigroup law, scalar value") {
    TorusGrid g(2, 32, 2.0 * PI);
    TestFamily fam;
    auto f = fam.make(g, 1, 2);
    CHECK(rel_diff(heat_semigroup(f, 0.0, 0.8), f) == 0.0);
    CHECK_THROWS(heat_semigroup(f, -1.0, 0.8));

    SplitMix64 rng(7);
    for (int trial = 0; trial < 4; ++trial) {
        double s = rng.uniform(0.0, 2.0);
        double t = rng.uniform(0.0, 2.0);
        auto a = heat_semigroup(heat_semigroup(f, s, 0.8), t, 0.8);
        auto b = heat_semigroup(f, s + t, 0.8);
        SpectralField d = a;
        d -= b;
        CHECK(d.l2_norm() <= 1e-12 * f.l2_norm());
    }

    SpectralField mode(g, 1, false);
    std::array<std::size_t, 3> ip{{1, 0, 0}};  // |xi| = 1 on L = 2 pi
    mode.coeff(0, g.encode(ip)) = cplx{1.0, 0.0};
    auto evolved = heat_semigroup(mode, 1.0, 1.0);
    CHECK(std::abs(evolved.coeff(0, g.encode(ip)) - cplx{std::exp(-1.0), 0.0}) < 1e-14);
}

TEST_CASE("leray: fixes divergence-free fields, annihilates gradients, idempotent") {
    TorusGrid g(2, 32, 2.0 * PI);
    TestFamily fam;
    fam.divergence_free = true;
    auto u = fam.make(g, 2, 3);
    CHECK(rel_diff(leray_project(u), u) < 1e-13);

    // gradient of a zero-mean scalar
    TestFamily famS;
    auto phi = famS.make(g, 1, 4);
    SpectralField gradphi(g, 2, true);
    for (int d = 0; d < 2; ++d) {
        auto dphi = partial_derivative(phi, d);
        for (std::size_t i = 0; i < g.total(); ++i) gradphi.coeff(d, i) = dphi.coeff(0, i);
    }
    CHECK(leray_project(gradphi).coeff_max() < 1e-13 * gradphi.coeff_max());

    // idempotence against the explicit mode-by-mode formula
    TestFamily famV;
    auto w = famV.make(g, 2, 5);
    auto pw = leray_project(w);
    CHECK(rel_diff(leray_project(pw), pw) < 1e-13);
    std::array<long, 3> k{};
    double werr = 0.0;
    for (std::size_t i = 1; i < g.total(); ++i) {
        g.wavevector(i, k);
        double xi0 = g.xi_of(k[0]), xi1 = g.xi_of(k[1]);
        double x2 = xi0 * xi0 + xi1 * xi1;
        cplx dot = xi0 * w.coeff(0, i) + xi1 * w.coeff(1, i);
        cplx e0 = w.coeff(0, i) - xi0 * dot / x2;
        cplx e1 = w.coeff(1, i) - xi1 * dot / x2;
        werr = std::max({werr, std::abs(pw.coeff(0, i) - e0), std::abs(pw.coeff(1, i) - e1)});
    }
    CHECK(werr < 1e-13 * w.coeff_max());

    CHECK(divergence(pw).coeff_max() <= 1e-12 * w.coeff_max());
    CHECK_THROWS(leray_project(phi));  // scalar input

    // self-adjointness on the spectral inner product
    auto v = famV.make(g, 2, 6);
    cplx lhs = leray_project(w).dot(v);
    cplx rhs = w.dot(leray_project(v));
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs + rhs + cplx{1e-30, 0}));
}

TEST_CASE("derivatives: single-mode identity and projection property") {
    TorusGrid g(1, 32, 5.0);
    std::vector<double> s(g.total());
    std::array<double, 3> x{};
    for (std::size_t i = 0; i < g.total(); ++i) {
        g.coords(i, x);
        s[i] = std::cos(2.0 * PI * x[0] / g.period());
    }
    auto f = SpectralField::from_samples(g, 1, s);
    auto df = partial_derivative(f, 0);
    auto ds = df.to_physical();
    double c = 2.0 * PI / g.period();
    double werr = 0.0;
    for (std::size_t i = 0; i < g.total(); ++i) {
        g.coords(i, x);
        werr = std::max(werr, std::fabs(ds[i] + c * std::sin(c * x[0])));
    }
    CHECK(werr < 1e-12);
    CHECK_THROWS(partial_derivative(f, 1));  // axis out of range

    CHECK(grad_tensor_norms(f, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("littlewood-paley: partition of unity and single-mode block support") {
    TorusGrid g(2, 64, 2.0 * PI);
    LittlewoodPaleyBank bank(g);
    // partition of unity on every nonzero grid frequency
    double werr = 0.0;
    for (std::size_t i = 1; i < g.total(); ++i) {
        double rho = std::sqrt(g.xi_norm2(i));
        double sum = 0.0;
        for (int j = bank.j_min(); j <= bank.j_max(); ++j) sum += bank.window(j, rho);
        werr = std::max(werr, std::fabs(sum - 1.0));
    }
    CHECK(werr < 1e-10);

    // a single mode at |xi| ~ 2^{j0} excites at most three adjacent levels
    SpectralField mode(g, 1, false);
    std::array<std::size_t, 3> ip{{8, 0, 0}};  // |xi| = 8 = 2^3
    mode.coeff(0, g.encode(ip)) = cplx{1.0, 0.0};
    int j0 = 3;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        auto bj = bank.block(mode, j);
        if (std::abs(j - j0) > 1) CHECK(bj.coeff_max() < 1e-14);
    }

    // blocks resum to f minus its mean
    TestFamily fam;
    auto f = fam.make(g, 1, 7);
    f.coeff(0, 0) = cplx{2.5, 0.0};
    SpectralField sum(g, 1, true);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) sum += bank.block(f, j);
    SpectralField expect = f;
    expect.zero_mean();
    CHECK(rel_diff(sum, expect) < 1e-10);
}

TEST_CASE("besov: zero field, lq monotonicity, p-embedding bracket") {
    TorusGrid g(1, 64, 2.0 * PI);
    LittlewoodPaleyBank bank(g);
    SpectralField z(g, 1, true);
    CHECK(bank.besov_norm(z, 0.3, 2, 2) == 0.0);

    TestFamily fam;
    auto fields = fam.make_all(g, 1);
    for (const auto& f : fields) {
        // Theorem levels: for q1 <= q2 the lq sum of one block sequence shrinks
        double n21 = bank.besov_norm(f, 0.4, 2, 1);
        double n22 = bank.besov_norm(f, 0.4, 2, 2);
        double n2i = bank.besov_norm(f, 0.4, 2, 0);
        CHECK(n22 <= n21 * (1 + 1e-12));
        CHECK(n2i <= n22 * (1 + 1e-12));
    }
    // p1 <= p2 with s1 = s2 + n(1/p1 - 1/p2): uniform ratio over the family
    double worst = 0.0;
    for (const auto& f : fields) {
        double s2 = 0.2, p1 = 2.0, p2 = 4.0;
        double s1 = s2 + 1.0 * (1.0 / p1 - 1.0 / p2);
        double a = bank.besov_norm(f, s1, p1, 2);
        double b = bank.besov_norm(f, s2, p2, 2);
        if (a > 0.0) worst = std::max(worst, b / a);
    }
    CHECK(worst < 10.0);

    CHECK_THROWS(bank.besov_norm(fields[0], 0.3, 0.5, 2.0));
}

TEST_CASE("besov: difference characterization bracket for a |sin|^0.7 profile") {
    TorusGrid g(1, 128, 2.0 * PI);
    std::vector<double> s(g.total());
    std::array<double, 3> x{};
    for (std::size_t i = 0; i < g.total(); ++i) {
        g.coords(i, x);
        s[i] = std::pow(std::fabs(std::sin(2.0 * PI * x[0] / g.period())), 0.7);
    }
    auto f = SpectralField::from_samples(g, 1, s);
    LittlewoodPaleyBank bank(g);
    double sreg = 0.45, p = 2.0, q = 2.0;
    double lp = bank.besov_norm(f, sreg, p, q);

    // direct quadrature of the double-difference integral
    double h = g.spacing();
    KahanSum acc;
    const long half = static_cast<long>(g.total());
    for (long dy = -half / 2 + 1; dy < half / 2; ++dy) {
        if (dy == 0) continue;
        double y = h * static_cast<double>(dy);
        KahanSum inner;
        for (std::size_t i = 0; i < g.total(); ++i) {
            std::size_t j = (i + static_cast<std::size_t>(dy + half)) % g.total();
            inner.add(sqr(s[j] - s[i]) * h);
        }
        acc.add(std::pow(inner.value(), q / p) * h / std::pow(std::fabs(y), 1.0 + q * sreg));
    }
    double diff = std::pow(acc.value(), 1.0 / q);
    double ratio = lp / diff;
    CHECK(ratio > 0.1);
    CHECK(ratio < 10.0);
}

TEST_CASE("scaling_transform: identity, mode doubling, dyadic requirement") {
    TorusGrid g(1, 32, 2.0 * PI);
    TestFamily fam;
    fam.k_max = 6;
    auto f = fam.make(g, 1, 8);
    CHECK(rel_diff(scaling_transform(f, 1, 0.0), f) == 0.0);

    SpectralField mode(g, 1, false);
    std::array<std::size_t, 3> i3{{3, 0, 0}};
    mode.coeff(0, g.encode(i3)) = cplx{1.0, 0.0};
    auto scaled = scaling_transform(mode, 2, 1.3);
    std::array<std::size_t, 3> i6{{6, 0, 0}};
    CHECK(std::abs(scaled.coeff(0, g.encode(i6)) - cplx{std::pow(2.0, 1.3), 0.0}) < 1e-13);

    CHECK_THROWS(scaling_transform(f, 3, 0.0));
    // crossing Nyquist is an error
    SpectralField high(g, 1, false);
    std::array<std::size_t, 3> i12{{12, 0, 0}};
    high.coeff(0, g.encode(i12)) = cplx{1.0, 0.0};
    CHECK_THROWS(scaling_transform(high, 2, 0.0));

    // lp_block commutes with scaling up to a level shift
    LittlewoodPaleyBank bank(g);
    auto f2 = scaling_transform(f, 2, 0.0);
    for (int j = bank.j_min(); j + 1 <= bank.j_max(); ++j) {
        auto a = scaling_transform(bank.block(f, j), 2, 0.0);
        auto b = bank.block(f2, j + 1);
        SpectralField d = a;
        d -= b;
        CHECK(d.coeff_max() < 1e-10 * (f.coeff_max() + 1e-300));
    }
}

TEST_CASE("three dimensions: leray, semigroup and derivatives compose cleanly") {
    TorusGrid g(3, 16, 2.0 * PI);
    TestFamily fam;
    fam.k_max = 4;
    auto u = fam.make(g, 3, 0);
    auto pu = leray_project(u);
    CHECK(divergence(pu).coeff_max() < 1e-12 * u.coeff_max());
    CHECK(rel_diff(leray_project(pu), pu) < 1e-13);
    auto evolved = heat_semigroup(pu, 0.4, 0.75);
    CHECK(divergence(evolved).coeff_max() < 1e-12 * u.coeff_max());
    CHECK(evolved.hermitian_defect() < 1e-12);
    CHECK(grad_tensor_norms(fam.make(g, 1, 1), 2) > 0.0);
}

TEST_CASE("reality is preserved through operator chains") {
    TorusGrid g(2, 32, 2.0 * PI);
    TestFamily fam;
    for (int i = 0; i < 5; ++i) {
        auto f = fam.make(g, 1, 100 + i);
        auto chained = partial_derivative(
            heat_semigroup(frac_laplacian(f, 0.65), 0.2, 0.8), i % 2);
        CHECK(chained.hermitian_defect() < 1e-12);
        auto u = fam.make(g, 2, 200 + i);
        CHECK(leray_project(u).hermitian_defect() < 1e-12);
    }
}

TEST_CASE("qnsf: file round trip preserves samples") {
    TorusGrid g(2, 16, 3.3);
    TestFamily fam;
    auto f = fam.make(g, 2, 9);
    std::string path = "qnsf_roundtrip.bin";
    write_qnsf(path, f);
    auto f2 = read_qnsf(path);
    CHECK(f2.grid().dim() == 2);
    CHECK(f2.grid().n_axis() == 16);
    CHECK(f2.components() == 2);
    CHECK(f2.grid().period() == doctest::Approx(3.3));
    CHECK(rel_diff(f, f2) < 1e-12);
    std::remove(path.c_str());
}
