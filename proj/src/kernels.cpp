#include "qnslab/kernels.hpp"

#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>

#include "qnslab/fft.hpp"
#include "qnslab/quadrature.hpp"

namespace qnslab {

namespace {

// Radial Fourier factor omega_n(z) = int_{S^{n-1}} exp(i z cos theta) dsigma
// and its first three derivatives. Series fallbacks keep z -> 0 stable.
double omega_deriv(int n, int deriv, double z) {
    switch (n) {
        case 1:
            switch (deriv) {
                case 0: return 2.0 * std::cos(z);
                case 1: return -2.0 * std::sin(z);
                case 2: return -2.0 * std::cos(z);
                default: return 2.0 * std::sin(z);
            }
        case 2: {
            if (z < 1e-4) {
                double z2 = z * z;
                switch (deriv) {
                    case 0: return 2.0 * PI * (1.0 - 0.25 * z2);
                    case 1: return 2.0 * PI * (-0.5 * z + z * z2 / 16.0);
                    case 2: return 2.0 * PI * (-0.5 + 3.0 * z2 / 16.0);
                    default: return 2.0 * PI * (3.0 * z / 8.0);
                }
            }
            double j0 = std::cyl_bessel_j(0.0, z);
            double j1 = std::cyl_bessel_j(1.0, z);
            switch (deriv) {
                case 0: return 2.0 * PI * j0;
                case 1: return -2.0 * PI * j1;
                case 2: return 2.0 * PI * (j1 / z - j0);
                default: return 2.0 * PI * (j0 / z - 2.0 * j1 / (z * z) + j1);
            }
        }
        default: {
            if (z < 1e-4) {
                double z2 = z * z;
                switch (deriv) {
                    case 0: return 4.0 * PI * (1.0 - z2 / 6.0);
                    case 1: return 4.0 * PI * (-z / 3.0 + z * z2 / 30.0);
                    case 2: return 4.0 * PI * (-1.0 / 3.0 + z2 / 10.0);
                    default: return 4.0 * PI * (z / 5.0 - z * z2 / 42.0);
                }
            }
            double s = std::sin(z), c = std::cos(z);
            double z2 = z * z, z3 = z2 * z, z4 = z2 * z2;
            switch (deriv) {
                case 0: return 4.0 * PI * (s / z);
                case 1: return 4.0 * PI * (c / z - s / z2);
                case 2: return 4.0 * PI * (-s / z - 2.0 * c / z2 + 2.0 * s / z3);
                default: return 4.0 * PI * (-c / z + 3.0 * s / z2 + 6.0 * c / z3 - 6.0 * s / z4);
            }
        }
    }
}

double rho_cutoff(double beta, double t) {
    // exp(-t rho^{2 beta}) below 1e-19
    return std::pow(43.0 / t, 1.0 / (2.0 * beta));
}

using CacheKey = std::tuple<int, int, int, double, double, double, double>;
std::shared_mutex cache_mutex;
std::map<CacheKey, QuadResult> radial_cache;

/// (2 pi)^{-n} int_0^inf exp(-t rho^{2 beta}) rho^pow omega_n^{(deriv)}(rho r) drho
QuadResult radial_inversion(int n, double beta, double t, int pow_rho, int deriv, double r,
                            double abs_tol) {
    CacheKey key{n, pow_rho, deriv, beta, t, r, abs_tol};
    {
        std::shared_lock lock(cache_mutex);
        auto it = radial_cache.find(key);
        if (it != radial_cache.end()) return it->second;
    }
    const double rho_max = rho_cutoff(beta, t);
    auto integrand = [&](double rho) {
        if (rho <= 0.0) return 0.0;
        return std::exp(-t * std::pow(rho, 2.0 * beta)) * std::pow(rho, pow_rho) *
               omega_deriv(n, deriv, rho * r);
    };
    QuadResult q = oscillatory_integral(integrand, rho_max, r, abs_tol * std::pow(2.0 * PI, n));
    const double scale = std::pow(2.0 * PI, -n);
    q.value *= scale;
    q.abs_error *= scale;
    {
        std::unique_lock lock(cache_mutex);
        radial_cache.emplace(key, q);
    }
    return q;
}

double surface_area(int n) {
    switch (n) {
        case 1: return 2.0;
        case 2: return 2.0 * PI;
        default: return 4.0 * PI;
    }
}

/// coefficient of r^{-n-s} in the inverse transform of |xi|^s (s > 0, non-even)
double riesz_tail_coefficient(int n, double s) {
    double gneg = std::tgamma(-0.5 * s);
    if (!std::isfinite(gneg) || gneg == 0.0) return 0.0;  // Gamma pole: no power tail
    return std::pow(2.0, s) * std::pow(PI, -0.5 * n) * std::tgamma(0.5 * (n + s)) / gneg;
}

}  // namespace

RadialProfile heat_kernel_profile(int n, double beta, double t, const std::vector<double>& radii,
                                  double abs_tol) {
    require(n >= 1 && n <= 3, "heat_kernel_profile: n must be 1, 2 or 3");
    require(t > 0.0, "heat_kernel_profile: t must be positive");
    RadialProfile p;
    p.n = n;
    p.beta = beta;
    p.t = t;
    p.radii = radii;
    for (double r : radii) {
        require(r >= 0.0, "heat_kernel_profile: radii must be nonnegative");
        QuadResult q = radial_inversion(n, beta, t, n - 1, 0, r, abs_tol);
        p.values.push_back(q.value);
        p.abs_error.push_back(q.abs_error);
    }
    return p;
}

double kernel_total_mass(int n, double beta, double t) {
    // self-similar change of variables: the mass is t-independent
    (void)t;
    const double r_cut = beta >= 1.0 ? 12.0 : 30.0;
    auto kernel = [&](double r) {
        return radial_inversion(n, beta, 1.0, n - 1, 0, r, 1e-12).value *
               std::pow(r, n - 1);
    };
    QuadResult body = gauss_kronrod(kernel, 0.0, r_cut, 3e-10);
    KahanSum tail;
    for (int j = 1; j <= 8; ++j) {
        double s = 2.0 * beta * static_cast<double>(j);
        double coef = riesz_tail_coefficient(n, s);
        if (coef == 0.0) continue;
        double sign = (j % 2 == 0) ? 1.0 : -1.0;
        double fact = std::tgamma(static_cast<double>(j) + 1.0);
        tail.add(sign / fact * coef * std::pow(r_cut, -s) / s);
    }
    return surface_area(n) * (body.value + tail.value());
}

OseenRadialParts oseen_radial_parts(int n, double beta, double t, const std::vector<double>& radii,
                                    double abs_tol) {
    OseenRadialParts parts;
    parts.radii = radii;
    for (double r : radii) {
        require(r > 0.0, "oseen_radial_parts: radii must be positive");
        double phi1 = radial_inversion(n, beta, t, n - 2, 1, r, abs_tol).value;
        double phi2 = radial_inversion(n, beta, t, n - 1, 2, r, abs_tol).value;
        parts.a.push_back(-phi1 / r);
        parts.b.push_back(phi1 / r - phi2);
    }
    return parts;
}

RadialProfile oseen_kernel_profile(int n, double beta, double t, int j, int l, int deriv_order,
                                   const std::vector<double>& radii, double abs_tol) {
    require(n >= 1 && n <= 3, "oseen_kernel_profile: n must be 1, 2 or 3");
    require(t > 0.0, "oseen_kernel_profile: t must be positive");
    require(j >= 0 && j < n && l >= 0 && l < n, "oseen_kernel_profile: component out of range");
    require(deriv_order == 0 || deriv_order == 1, "oseen_kernel_profile: deriv_order in {0,1}");
    RadialProfile p;
    p.n = n;
    p.beta = beta;
    p.t = t;
    p.deriv_order = deriv_order;
    p.j = j;
    p.l = l;
    p.radii = radii;
    // ray direction e_j for the diagonal, (e_j + e_l)/sqrt(2) off-diagonal
    const double ej = (j == l) ? 1.0 : 1.0 / std::sqrt(2.0);
    const double el = (j == l) ? 1.0 : 1.0 / std::sqrt(2.0);
    const double delta = (j == l) ? 1.0 : 0.0;
    const double ang = ej * el;
    for (double r : radii) {
        require(r > 0.0, "oseen_kernel_profile: radii must be positive");
        QuadResult q1 = radial_inversion(n, beta, t, n - 2, 1, r, abs_tol);
        QuadResult q2 = radial_inversion(n, beta, t, n - 1, 2, r, abs_tol);
        double err = q1.abs_error * (2.0 / r) + q2.abs_error;
        double a = -q1.value / r;
        double b = q1.value / r - q2.value;
        if (deriv_order == 0) {
            p.values.push_back(delta * a + ang * b);
        } else {
            QuadResult q3 = radial_inversion(n, beta, t, n, 3, r, abs_tol);
            double ap = -q2.value / r + q1.value / (r * r);
            double bp = q2.value / r - q1.value / (r * r) - q3.value;
            err += q3.abs_error + (q1.abs_error + q2.abs_error) * (2.0 / r + 2.0 / (r * r));
            p.values.push_back(delta * ap + ang * bp);
        }
        p.abs_error.push_back(err);
    }
    return p;
}

DecayEnvelopeReport decay_envelope_check(int k_max, double beta, std::size_t grid_n, double box) {
    require(k_max >= 1 && k_max <= 6, "decay_envelope_check: k_max must be in 1..6");
    const int n = 2;
    TorusGrid grid(n, grid_n, box);
    DecayEnvelopeReport rep;
    rep.beta = beta;
    rep.k_max = k_max;

    std::array<long, 3> k{};
    std::array<double, 3> x{};
    const std::array<double, 3> origin{{0.0, 0.0, 0.0}};
    for (int kk = 0; kk <= k_max; ++kk) {
        SpectralField w(grid, 1, true);
        for (std::size_t i = 1; i < grid.total(); ++i) {
            grid.wavevector(i, k);
            double xi1 = grid.xi_of(k[0]);
            double xi2 = grid.xi_of(k[1]);
            double x2 = xi1 * xi1 + xi2 * xi2;
            // component P_{11} d_2 of the dissipation kernel at t = 1
            cplx symbol = cplx{0.0, xi2} * (xi2 * xi2 / x2) *
                          std::exp(-std::pow(x2, beta));
            symbol *= std::pow(cplx{0.0, xi1}, kk);
            w.coeff(0, i) = symbol / std::pow(box, n);
        }
        auto phys = w.to_physical();
        double m = 0.0;
        const double kexp = kk > 0 ? std::pow(static_cast<double>(kk), -1.0 / (2.0 * beta)) : 1.0;
        for (std::size_t i = 0; i < grid.total(); ++i) {
            grid.coords(i, x);
            double d = grid.torus_dist(x, origin);
            double weight = std::pow(kexp + d, n + 1);
            m = std::max(m, std::fabs(phys[i]) * weight);
        }
        if (kk > 0) m /= std::pow(static_cast<double>(kk), kk / (2.0 * beta));
        rep.M.push_back(m);
    }
    double lo = 1e300, hi = 0.0;
    for (int kk = 1; kk <= k_max; ++kk) {
        double root = std::pow(rep.M[static_cast<std::size_t>(kk)], 1.0 / kk);
        rep.M_root.push_back(root);
        lo = std::min(lo, root);
        hi = std::max(hi, root);
    }
    rep.fitted_C = hi;
    rep.root_ratio = hi / lo;
    return rep;
}

std::vector<double> periodized_kernel_samples(const TorusGrid& grid, double beta, double t,
                                              int images, double abs_tol) {
    const int n = grid.dim();
    const double L = grid.period();
    std::vector<double> out(grid.total(), 0.0);
    std::array<double, 3> x{};
    for (std::size_t i = 0; i < grid.total(); ++i) {
        grid.coords(i, x);
        KahanSum s;
        std::array<int, 3> m{};
        std::function<void(int)> loop = [&](int d) {
            if (d == n) {
                double r2 = 0.0;
                for (int dd = 0; dd < n; ++dd) {
                    double c = x[static_cast<std::size_t>(dd)] +
                               L * static_cast<double>(m[static_cast<std::size_t>(dd)]);
                    // image offsets measured from the kernel center at 0
                    if (x[static_cast<std::size_t>(dd)] > L / 2.0) c -= L;
                    r2 += c * c;
                }
                double r = std::sqrt(r2);
                s.add(radial_inversion(n, beta, t, n - 1, 0, r, abs_tol).value);
                return;
            }
            for (int v = -images; v <= images; ++v) {
                m[static_cast<std::size_t>(d)] = v;
                loop(d + 1);
            }
        };
        loop(0);
        out[i] = s.value();
    }
    return out;
}

SpectralField convolve_with_samples(const SpectralField& f, const std::vector<double>& kernel_samples) {
    const TorusGrid& g = f.grid();
    require(kernel_samples.size() == g.total(), "convolve_with_samples: kernel shape mismatch");
    auto kf = SpectralField::from_samples(g, 1, kernel_samples);
    SpectralField out = f;
    const double vol = std::pow(g.period(), g.dim());
    out.apply_multiplier([&](std::size_t i) { return kf.coeff(0, i) * vol; });
    return out;
}

void write_profile_csv(const std::string& path, const RadialProfile& p) {
    std::ofstream out(path);
    require(static_cast<bool>(out), "write_profile_csv: cannot open " + path);
    out << "r,value,abs_error_estimate\n";
    out.precision(17);
    for (std::size_t i = 0; i < p.radii.size(); ++i)
        out << p.radii[i] << "," << p.values[i] << "," << p.abs_error[i] << "\n";
}

}  // namespace qnslab
