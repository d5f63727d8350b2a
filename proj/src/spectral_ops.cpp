#include "qnslab/spectral_ops.hpp"

namespace qnslab {

SpectralField frac_laplacian(const SpectralField& f, double s) {
    SpectralField out = f;
    if (s == 0.0) return out;
    const TorusGrid& g = f.grid();
    out.apply_multiplier([&](std::size_t i) -> cplx {
        double x2 = g.xi_norm2(i);
        if (x2 == 0.0) return cplx{0.0, 0.0};
        return cplx{std::pow(x2, s), 0.0};
    });
    return out;
}

SpectralField heat_semigroup(const SpectralField& f, double t, double beta) {
    require(t >= 0.0, "heat_semigroup: negative time");
    SpectralField out = f;
    if (t == 0.0) return out;
    const TorusGrid& g = f.grid();
    out.apply_multiplier([&](std::size_t i) -> cplx {
        double x2 = g.xi_norm2(i);
        return cplx{std::exp(-t * std::pow(x2, beta)), 0.0};
    });
    return out;
}

SpectralField leray_project(const SpectralField& u) {
    const TorusGrid& g = u.grid();
    require(u.components() == g.dim(), "leray_project: field must have n components");
    SpectralField out = u;
    const int n = g.dim();
    std::array<long, 3> k{};
    for (std::size_t i = 1; i < g.total(); ++i) {
        g.wavevector(i, k);
        double xi[3];
        double x2 = 0.0;
        for (int d = 0; d < n; ++d) {
            xi[d] = g.xi_of(k[static_cast<std::size_t>(d)]);
            x2 += xi[d] * xi[d];
        }
        cplx dot{0.0, 0.0};
        for (int d = 0; d < n; ++d) dot += xi[d] * out.coeff(d, i);
        dot /= x2;
        for (int d = 0; d < n; ++d) out.coeff(d, i) -= xi[d] * dot;
    }
    return out;
}

SpectralField partial_derivative(const SpectralField& f, int axis) {
    const TorusGrid& g = f.grid();
    require(axis >= 0 && axis < g.dim(), "partial_derivative: axis out of range");
    SpectralField out = f;
    const long nyquist = static_cast<long>(g.n_axis()) / 2;
    std::array<long, 3> k{};
    out.apply_multiplier([&](std::size_t i) -> cplx {
        g.wavevector(i, k);
        long ka = k[static_cast<std::size_t>(axis)];
        if (ka == nyquist) return cplx{0.0, 0.0};
        return cplx{0.0, g.xi_of(ka)};
    });
    return out;
}

SpectralField divergence(const SpectralField& u) {
    const TorusGrid& g = u.grid();
    require(u.components() == g.dim(), "divergence: field must have n components");
    SpectralField out(g, 1, u.is_real());
    for (int d = 0; d < g.dim(); ++d) {
        SpectralField dd = partial_derivative(u.component(d), d);
        for (std::size_t i = 0; i < g.total(); ++i) out.coeff(0, i) += dd.coeff(0, i);
    }
    return out;
}

namespace {
void enumerate_multi_indices(int n, int k, std::array<int, 3>& cur, int axis,
                             const std::function<void(const std::array<int, 3>&)>& visit) {
    if (axis == n - 1) {
        cur[static_cast<std::size_t>(axis)] = k;
        visit(cur);
        return;
    }
    for (int j = 0; j <= k; ++j) {
        cur[static_cast<std::size_t>(axis)] = j;
        enumerate_multi_indices(n, k - j, cur, axis + 1, visit);
    }
}
}  // namespace

double grad_tensor_norms(const SpectralField& f, int k) {
    require(k >= 0, "grad_tensor_norms: order must be nonnegative");
    if (k == 0) return f.linf_norm();
    const int n = f.grid().dim();
    double worst = 0.0;
    std::array<int, 3> gamma{};
    enumerate_multi_indices(n, k, gamma, 0, [&](const std::array<int, 3>& mi) {
        SpectralField d = f;
        for (int axis = 0; axis < n; ++axis)
            for (int rep = 0; rep < mi[static_cast<std::size_t>(axis)]; ++rep)
                d = partial_derivative(d, axis);
        worst = std::max(worst, d.linf_norm());
    });
    return worst;
}

SpectralField scaling_transform(const SpectralField& f, std::size_t lambda, double gamma) {
    require(lambda >= 1 && is_pow2(lambda), "scaling_transform: lambda must be a dyadic integer");
    if (lambda == 1) {
        SpectralField out = f;
        out *= std::pow(static_cast<double>(lambda), gamma);
        return out;
    }
    const TorusGrid& g = f.grid();
    const long n = static_cast<long>(g.n_axis());
    const long lam = static_cast<long>(lambda);
    SpectralField out(g, f.components(), f.is_real());
    const double amp = std::pow(static_cast<double>(lambda), gamma);
    std::array<long, 3> k{};
    std::array<std::size_t, 3> idx{};
    for (std::size_t i = 0; i < g.total(); ++i) {
        bool nonzero = false;
        for (int c = 0; c < f.components(); ++c)
            if (f.coeff(c, i) != cplx{0.0, 0.0}) nonzero = true;
        if (!nonzero) continue;
        g.wavevector(i, k);
        for (int d = 0; d < g.dim(); ++d) {
            long kk = k[static_cast<std::size_t>(d)] * lam;
            require(kk > -n / 2 && kk <= n / 2,
                    "scaling_transform: mode would cross the Nyquist frequency");
            idx[static_cast<std::size_t>(d)] = static_cast<std::size_t>((kk % n + n) % n);
        }
        std::size_t j = g.encode(idx);
        for (int c = 0; c < f.components(); ++c) out.coeff(c, j) = amp * f.coeff(c, i);
    }
    return out;
}

void dealias_two_thirds(SpectralField& f) {
    const TorusGrid& g = f.grid();
    const long cut = static_cast<long>(g.n_axis()) / 3;
    std::array<long, 3> k{};
    f.apply_multiplier([&](std::size_t i) -> cplx {
        g.wavevector(i, k);
        for (int d = 0; d < g.dim(); ++d)
            if (std::labs(k[static_cast<std::size_t>(d)]) > cut) return cplx{0.0, 0.0};
        return cplx{1.0, 0.0};
    });
}

SpectralField refine_grid(const SpectralField& f, std::size_t new_n_axis) {
    const TorusGrid& g = f.grid();
    require(new_n_axis >= g.n_axis() && new_n_axis % g.n_axis() == 0,
            "refine_grid: new resolution must be a multiple of the old one");
    TorusGrid fine(g.dim(), new_n_axis, g.period());
    SpectralField out(fine, f.components(), f.is_real());
    const long n_new = static_cast<long>(new_n_axis);
    std::array<long, 3> k{};
    std::array<std::size_t, 3> idx{};
    for (std::size_t i = 0; i < g.total(); ++i) {
        g.wavevector(i, k);
        for (int d = 0; d < g.dim(); ++d)
            idx[static_cast<std::size_t>(d)] =
                static_cast<std::size_t>((k[static_cast<std::size_t>(d)] % n_new + n_new) % n_new);
        std::size_t j = fine.encode(idx);
        for (int c = 0; c < f.components(); ++c) out.coeff(c, j) = f.coeff(c, i);
    }
    return out;
}

SpectralField shift_field(const SpectralField& f, const std::array<long, 3>& shift) {
    const TorusGrid& g = f.grid();
    SpectralField out = f;
    const double h = g.spacing();
    std::array<long, 3> k{};
    out.apply_multiplier([&](std::size_t i) -> cplx {
        g.wavevector(i, k);
        double phase = 0.0;
        for (int d = 0; d < g.dim(); ++d)
            phase -= g.xi_of(k[static_cast<std::size_t>(d)]) * h *
                     static_cast<double>(shift[static_cast<std::size_t>(d)]);
        return std::polar(1.0, phase);
    });
    return out;
}

}  // namespace qnslab
