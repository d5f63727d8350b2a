#include "qnslab/halfspace.hpp"

#include "qnslab/spectral_ops.hpp"

namespace qnslab {

TimeGrid TimeGrid::geometric(double horizon, std::size_t nodes, double ratio) {
    require(horizon > 0.0, "TimeGrid: horizon must be positive");
    require(nodes >= 8, "TimeGrid: at least 8 nodes");
    require(ratio > 1.0, "TimeGrid: ratio must exceed 1");
    TimeGrid tg;
    tg.horizon_ = horizon;
    tg.ratio_ = ratio;
    tg.nodes_.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i)
        tg.nodes_[i] = horizon * std::pow(ratio, -static_cast<double>(nodes - 1 - i));
    return tg;
}

TimeGrid TimeGrid::geometric_from(double t_min, double horizon, std::size_t nodes) {
    require(t_min > 0.0 && t_min < horizon, "TimeGrid: need 0 < t_min < horizon");
    double ratio = std::pow(horizon / t_min, 1.0 / static_cast<double>(nodes - 1));
    return geometric(horizon, nodes, ratio);
}

double TimeGrid::upper_edge(std::size_t i) const {
    if (i + 1 >= nodes_.size()) return nodes_.back();
    return std::sqrt(nodes_[i] * nodes_[i + 1]);
}

double TimeGrid::lower_edge(std::size_t i, double gamma) const {
    if (i > 0) return std::sqrt(nodes_[i - 1] * nodes_[i]);
    // First cell: integrable weights reach down to 0 and capture the full
    // mass; non-integrable weights are truncated at the node's own geometric
    // lower edge.
    if (gamma < 1.0) return 0.0;
    return nodes_[0] / std::sqrt(ratio_);
}

double TimeGrid::weight(std::size_t i, double gamma, double s_max) const {
    double lo = lower_edge(i, gamma);
    double hi = std::min(upper_edge(i), s_max);
    if (hi <= lo) return 0.0;
    if (gamma == 0.0) return hi - lo;
    if (std::fabs(gamma - 1.0) < 1e-14) return std::log(hi / lo);
    double p = 1.0 - gamma;
    return (std::pow(hi, p) - std::pow(lo, p)) / p;
}

TimeGrid TimeGrid::refined() const {
    // geometric midpoints inserted; first and last nodes unchanged
    return geometric(horizon_, 2 * nodes_.size() - 1, std::sqrt(ratio_));
}

HalfSpaceSample::HalfSpaceSample(TimeGrid tgrid, TorusGrid sgrid, int components, bool nonneg)
    : tgrid_(std::move(tgrid)), sgrid_(sgrid), components_(components), nonneg_(nonneg),
      values_(tgrid_.size() * static_cast<std::size_t>(components) * sgrid.total(), 0.0) {
    require(components >= 1, "HalfSpaceSample: components must be >= 1");
}

HalfSpaceSample HalfSpaceSample::from_fields(const TimeGrid& tg,
                                             const std::vector<SpectralField>& slices) {
    require(!slices.empty() && slices.size() == tg.size(),
            "HalfSpaceSample: one field per time node required");
    const TorusGrid& g = slices[0].grid();
    HalfSpaceSample hs(tg, g, slices[0].components());
    for (std::size_t it = 0; it < tg.size(); ++it) {
        require(slices[it].grid() == g && slices[it].components() == hs.components_,
                "HalfSpaceSample: slice shape mismatch");
        // real slices keep their signed samples; complex slices store the
        // pointwise modulus (every consumer of complex data is norm-based)
        if (slices[it].is_real()) {
            auto phys = slices[it].to_physical();
            for (int c = 0; c < hs.components_; ++c)
                for (std::size_t ix = 0; ix < g.total(); ++ix)
                    hs.at(it, c, ix) = phys[static_cast<std::size_t>(c) * g.total() + ix];
        } else {
            auto phys = slices[it].to_physical_complex();
            for (int c = 0; c < hs.components_; ++c)
                for (std::size_t ix = 0; ix < g.total(); ++ix)
                    hs.at(it, c, ix) = std::abs(phys[static_cast<std::size_t>(c) * g.total() + ix]);
        }
    }
    return hs;
}

double HalfSpaceSample::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

HalfSpaceSample heat_extension(const SpectralField& f, const TimeGrid& tg, double beta) {
    std::vector<SpectralField> slices;
    slices.reserve(tg.size());
    for (std::size_t i = 0; i < tg.size(); ++i)
        slices.push_back(heat_semigroup(f, tg.node(i), beta));
    return HalfSpaceSample::from_fields(tg, slices);
}

Window canonical_window(double beta, int j) {
    Window w;
    w.name = "grad_heat_kernel_axis" + std::to_string(j);
    w.symbol = [beta, j](const std::array<double, 3>& xi, int /*n*/) -> cplx {
        double x2 = 0.0;
        for (double v : xi) x2 += v * v;
        return cplx{0.0, xi[static_cast<std::size_t>(j)]} * std::exp(-std::pow(x2, beta));
    };
    return w;
}

WindowCertificate validate_window(const Window& w, int n, double envelope_cap) {
    // reference grid: large box so the envelope check sees the tail
    TorusGrid g(n, 256, 64.0);
    SpectralField phi(g, 1, true);
    std::array<long, 3> k{};
    std::array<double, 3> xi{};
    for (std::size_t i = 0; i < g.total(); ++i) {
        g.wavevector(i, k);
        for (int d = 0; d < n; ++d) xi[static_cast<std::size_t>(d)] = g.xi_of(k[static_cast<std::size_t>(d)]);
        phi.coeff(0, i) = w.symbol(xi, n) / std::pow(g.period(), n);
    }
    WindowCertificate cert;
    std::array<double, 3> zero{{0.0, 0.0, 0.0}};
    cert.mean_zero = std::abs(w.symbol(zero, n)) < 1e-12;
    auto phys = phi.to_physical();
    const double cell = std::pow(g.spacing(), n);
    KahanSum l1;
    double env = 0.0;
    std::array<double, 3> x{};
    const std::array<double, 3> origin{{0.0, 0.0, 0.0}};
    for (std::size_t i = 0; i < g.total(); ++i) {
        l1.add(std::fabs(phys[i]) * cell);
        g.coords(i, x);
        double d = g.torus_dist(x, origin);
        env = std::max(env, std::fabs(phys[i]) * std::pow(1.0 + d, n + 1));
    }
    cert.integrable = std::isfinite(l1.value());
    cert.envelope_constant = env;
    cert.envelope_ok = env < envelope_cap;
    return cert;
}

SpectralField window_convolve(const SpectralField& f, const Window& w, double t) {
    const TorusGrid& g = f.grid();
    SpectralField out = f;
    std::array<long, 3> k{};
    std::array<double, 3> xi{};
    out.apply_multiplier([&](std::size_t i) -> cplx {
        g.wavevector(i, k);
        for (int d = 0; d < g.dim(); ++d)
            xi[static_cast<std::size_t>(d)] = t * g.xi_of(k[static_cast<std::size_t>(d)]);
        return w.symbol(xi, g.dim());
    });
    return out;
}

}  // namespace qnslab
