#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qnslab/kernels.hpp"
#include "qnslab/quadrature.hpp"
#include "qnslab/spectral_ops.hpp"
#include "qnslab/test_family.hpp"

using namespace qnslab;

namespace {
std::vector<double> linspace(double a, double b, int count) {
    std::vector<double> v;
    for (int i = 0; i < count; ++i)
        v.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    return v;
}
std::vector<double> logspace(double a, double b, int count) {
    std::vector<double> v;
    for (int i = 0; i < count; ++i)
        v.push_back(a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(count - 1)));
    return v;
}
}  // namespace

TEST_CASE("heat kernel: beta = 1 matches the closed-form Gaussian") {
    for (int n = 1; n <= 3; ++n) {
        for (double t : {0.5, 1.0}) {
            auto radii = linspace(0.0, 10.0, 41);
            auto prof = heat_kernel_profile(n, 1.0, t, radii);
            double peak = std::pow(4.0 * PI * t, -0.5 * n);
            double werr = 0.0;
            for (std::size_t i = 0; i < radii.size(); ++i) {
                double exact = peak * std::exp(-radii[i] * radii[i] / (4.0 * t));
                werr = std::max(werr, std::fabs(prof.values[i] - exact));
            }
            CHECK(werr / peak < 1e-8);
        }
    }
}

TEST_CASE("heat kernel: self-similarity in t") {
    const int n = 2;
    const double beta = 0.75;
    const double t = 0.37;
    auto radii = linspace(0.1, 6.0, 25);
    auto prof_t = heat_kernel_profile(n, beta, t, radii);
    std::vector<double> scaled_radii;
    const double lam = std::pow(t, 1.0 / (2.0 * beta));
    for (double r : radii) scaled_radii.push_back(r / lam);
    auto prof_1 = heat_kernel_profile(n, beta, 1.0, scaled_radii);
    double peak = heat_kernel_profile(n, beta, t, {0.0}).values[0];
    double werr = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double expect = std::pow(t, -0.5 * n / beta) * prof_1.values[i];
        werr = std::max(werr, std::fabs(prof_t.values[i] - expect));
    }
    CHECK(werr / peak < 1e-9);
}

TEST_CASE("heat kernel: unit mass for fractional orders") {
    for (int n = 1; n <= 3; ++n)
        for (double beta : {0.6, 0.75, 0.9, 1.0})
            CHECK(std::fabs(kernel_total_mass(n, beta, 1.0) - 1.0) < 1e-8);
}

TEST_CASE("heat kernel: envelope bounded by c (1+r)^{-n-1} on the sampled range") {
    const int n = 2;
    const double beta = 0.7;
    auto radii = logspace(0.2, 20.0, 30);
    auto prof = heat_kernel_profile(n, beta, 1.0, radii);
    double c = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i)
        c = std::max(c, std::fabs(prof.values[i]) * std::pow(1.0 + radii[i], n + 1));
    CHECK(c < 10.0);  // finite envelope constant; positivity is not asserted
}

TEST_CASE("oseen kernel: trace over the diagonal recovers the heat kernel") {
    const double beta = 0.8;
    const double t = 0.6;
    for (int n = 2; n <= 3; ++n) {
        auto radii = linspace(0.2, 6.0, 15);
        auto parts = oseen_radial_parts(n, beta, t, radii);
        auto heat = heat_kernel_profile(n, beta, t, radii);
        double peak = heat_kernel_profile(n, beta, t, {0.0}).values[0];
        double werr = 0.0;
        for (std::size_t i = 0; i < radii.size(); ++i) {
            double trace = n * parts.a[i] + parts.b[i];
            werr = std::max(werr, std::fabs(trace - heat.values[i]));
        }
        CHECK(werr / peak < 1e-9);
    }
}

TEST_CASE("oseen kernel: self-similarity in t") {
    const int n = 2;
    const double beta = 0.75;
    const double t = 0.42;
    auto radii = linspace(0.3, 5.0, 12);
    auto prof_t = oseen_kernel_profile(n, beta, t, 0, 0, 0, radii);
    std::vector<double> scaled;
    const double lam = std::pow(t, 1.0 / (2.0 * beta));
    for (double r : radii) scaled.push_back(r / lam);
    auto prof_1 = oseen_kernel_profile(n, beta, 1.0, 0, 0, 0, scaled);
    double peak = std::fabs(prof_t.values[0]);
    double werr = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double expect = std::pow(t, -0.5 * n / beta) * prof_1.values[i];
        werr = std::max(werr, std::fabs(prof_t.values[i] - expect));
    }
    CHECK(werr / peak < 1e-9);
}

TEST_CASE("oseen kernel: gradient profile decays at least like r^{-(n+1)}") {
    const int n = 2;
    const double beta = 0.75;
    // t small enough that [2,20] sits in the power-tail regime of the kernel
    auto radii = logspace(2.0, 20.0, 25);
    auto prof = oseen_kernel_profile(n, beta, 0.05, 0, 0, 1, radii);
    double worst_slope = -1e9;
    for (std::size_t i = 0; i + 2 < radii.size(); ++i) {
        double num = std::log(std::fabs(prof.values[i + 2])) - std::log(std::fabs(prof.values[i]));
        double den = std::log(radii[i + 2]) - std::log(radii[i]);
        worst_slope = std::max(worst_slope, num / den);
    }
    CHECK(worst_slope <= -(n + 1) + 0.2);
}

TEST_CASE("decay envelope: k = 0 weighted sup is finite (pointwise gradient bound)") {
    auto rep = decay_envelope_check(1, 0.75, 256, 40.0);
    CHECK(rep.M[0] > 0.0);
    CHECK(rep.M[0] < 100.0);
}

TEST_CASE("decay envelope: beta = 1 Gaussian-route envelope finite") {
    auto rep = decay_envelope_check(2, 1.0, 256, 40.0);
    CHECK(std::isfinite(rep.M[0]));
    CHECK(std::isfinite(rep.fitted_C));
}

TEST_CASE("decay envelope: M_k^{1/k} stays bounded across k") {
    auto rep = decay_envelope_check(6, 0.75, 512, 40.0);
    CHECK(rep.root_ratio < 10.0);
    for (double root : rep.M_root) CHECK(std::isfinite(root));
}

TEST_CASE("consistency: periodized sampled kernel matches heat_semigroup at beta = 1") {
    TorusGrid g(1, 256, 2.0 * PI);
    TestFamily fam;
    fam.k_max = 10;
    auto f = fam.make(g, 1, 0);
    for (double t : {0.05, 0.1}) {
        // Gaussian tails at one box distance are < 1e-8 here, so two image
        // shells periodize exactly to quadrature accuracy.
        auto ker = periodized_kernel_samples(g, 1.0, t, 2);
        auto conv = convolve_with_samples(f, ker);
        auto exact = heat_semigroup(f, t, 1.0);
        SpectralField d = conv;
        d -= exact;
        CHECK(d.l2_norm() < 1e-6 * f.l2_norm());
    }
}

TEST_CASE("oscillatory quadrature: tail extrapolation handles slow envelopes") {
    // int_0^inf e^{-a rho} cos(rho r) drho = a / (a^2 + r^2); the envelope
    // outlives the panel budget, so the alternating tail is extrapolated
    double a = 1e-3, r = 50.0;
    auto f = [&](double rho) { return std::exp(-a * rho) * std::cos(rho * r); };
    auto q = qnslab::oscillatory_integral(f, 43.0 / a, r, 1e-9);
    double exact = a / (a * a + r * r);
    CHECK(std::fabs(q.value - exact) < 1e-10);
}

TEST_CASE("profile csv dump has the expected columns") {
    auto prof = heat_kernel_profile(1, 0.8, 1.0, {0.0, 1.0, 2.0});
    std::string path = "prof_dump.csv";
    write_profile_csv(path, prof);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "r,value,abs_error_estimate");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);
    std::remove(path.c_str());
}
