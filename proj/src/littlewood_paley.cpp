#include "qnslab/littlewood_paley.hpp"

namespace qnslab {

namespace {
// smooth cutoff: 1 for r <= 1, 0 for r >= 2
double smooth_step(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    auto h = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    double a = h(2.0 - r);
    double b = h(r - 1.0);
    return a / (a + b);
}
}  // namespace

double LittlewoodPaleyBank::base_window(double rho) {
    // phi_0 = chi(rho) - chi(2 rho): supported in {1/2 < rho <= 2},
    // telescoping to 1 away from 0.
    return smooth_step(rho) - smooth_step(2.0 * rho);
}

LittlewoodPaleyBank::LittlewoodPaleyBank(const TorusGrid& grid) : grid_(grid) {
    const double xi1 = 2.0 * PI / grid.period();        // lowest nonzero |xi|
    const double xiN = grid.xi_max();                   // largest |xi|
    j_min_ = static_cast<int>(std::floor(std::log2(xi1))) - 1;
    j_max_ = static_cast<int>(std::ceil(std::log2(xiN))) + 1;
}

double LittlewoodPaleyBank::window(int j, double rho) const {
    if (rho <= 0.0) return 0.0;
    double num = base_window(std::ldexp(rho, -j));
    double den = 0.0;
    for (int l = j_min_; l <= j_max_; ++l) den += base_window(std::ldexp(rho, -l));
    return den > 0.0 ? num / den : 0.0;
}

SpectralField LittlewoodPaleyBank::block(const SpectralField& f, int j) const {
    require(j >= j_min_ && j <= j_max_, "lp_block: level outside bank range");
    SpectralField out = f;
    out.apply_multiplier([&](std::size_t i) -> cplx {
        double rho = std::sqrt(grid_.xi_norm2(i));
        return cplx{window(j, rho), 0.0};
    });
    return out;
}

double LittlewoodPaleyBank::lp_norm(const SpectralField& f, double p) const {
    if (p <= 0.0) return f.linf_norm();  // p = infinity
    auto phys = f.to_physical_complex();
    const std::size_t total = grid_.total();
    const double cell = std::pow(grid_.spacing(), grid_.dim());
    KahanSum s;
    for (std::size_t i = 0; i < total; ++i) {
        double mag2 = 0.0;
        for (int c = 0; c < f.components(); ++c)
            mag2 += std::norm(phys[static_cast<std::size_t>(c) * total + i]);
        s.add(std::pow(mag2, 0.5 * p) * cell);
    }
    return std::pow(s.value(), 1.0 / p);
}

double LittlewoodPaleyBank::besov_norm(const SpectralField& f, double s, double p, double q) const {
    require(p <= 0.0 || p >= 1.0, "besov_norm: p must be in [1,inf]");
    require(q <= 0.0 || q >= 1.0, "besov_norm: q must be in [1,inf]");
    std::vector<double> terms;
    for (int j = j_min_; j <= j_max_; ++j) {
        SpectralField bj = block(f, j);
        if (bj.coeff_max() == 0.0) continue;
        terms.push_back(std::pow(2.0, s * j) * lp_norm(bj, p));
    }
    if (terms.empty()) return 0.0;
    if (q <= 0.0) return *std::max_element(terms.begin(), terms.end());
    KahanSum acc;
    for (double t : terms) acc.add(std::pow(t, q));
    return std::pow(acc.value(), 1.0 / q);
}

}  // namespace qnslab
