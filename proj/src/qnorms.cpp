#include "qnslab/qnorms.hpp"

#include "qnslab/littlewood_paley.hpp"
#include "qnslab/spectral_ops.hpp"

namespace qnslab {

namespace {

std::string range_note(RadiusRange r) {
    return r == RadiusRange::RPow2Beta ? "radius range: r^{2beta} in (0,T)"
                                       : "radius range: r in (0,T)";
}

const char* kMeanModeNote = "mean mode: homogeneous operators zero k=0; norms are modulo constants";

/// torus displacement between two sample indices, unwrapped to the nearest image
double sample_dist(const TorusGrid& g, std::size_t a, std::size_t b) {
    std::array<std::size_t, 3> ia{}, ib{};
    g.decode(a, ia);
    g.decode(b, ib);
    const double h = g.spacing();
    const double L = g.period();
    double s = 0.0;
    for (int d = 0; d < g.dim(); ++d) {
        double diff = h * (static_cast<double>(ia[static_cast<std::size_t>(d)]) -
                           static_cast<double>(ib[static_cast<std::size_t>(d)]));
        if (diff > 0.5 * L) diff -= L;
        if (diff < -0.5 * L) diff += L;
        s += diff * diff;
    }
    return std::sqrt(s);
}

}  // namespace

double q_cube_value(const std::vector<double>& phys, const TorusGrid& g, const FracParams& p,
                    const CubeFamily& fam, const Cube& cube) {
    auto pts = fam.samples(cube);
    const double h2n = std::pow(g.spacing(), 2 * g.dim());
    const double expo = static_cast<double>(g.dim()) + 2.0 * (p.alpha - p.beta + 1.0);
    KahanSum acc;
    for (std::size_t a = 0; a < pts.size(); ++a) {
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
            double diff = phys[pts[a]] - phys[pts[b]];
            if (diff == 0.0) continue;
            double dist = sample_dist(g, pts[a], pts[b]);
            acc.add(diff * diff * std::pow(dist, -expo) * h2n);
        }
    }
    return 2.0 * acc.value();  // ordered pairs
}

double q_cube_translated_value(const std::vector<double>& phys, const TorusGrid& g,
                               const FracParams& p, const CubeFamily& fam, const Cube& cube) {
    auto pts = fam.samples(cube);
    const int n = g.dim();
    const double h = g.spacing();
    const double h2n = std::pow(h, 2 * n);
    const double expo = static_cast<double>(n) + 2.0 * (p.alpha - p.beta + 1.0);
    const long reach = static_cast<long>(std::ceil(cube.side / h)) - 1;
    const long ntot = static_cast<long>(g.n_axis());

    // enumerate grid offsets 0 < |y| < l(I)
    std::vector<std::array<long, 3>> offsets;
    std::array<long, 3> cur{};
    std::function<void(int)> rec = [&](int d) {
        if (d == n) {
            double r2 = 0.0;
            bool zero = true;
            for (int dd = 0; dd < n; ++dd) {
                if (cur[static_cast<std::size_t>(dd)] != 0) zero = false;
                r2 += sqr(h * static_cast<double>(cur[static_cast<std::size_t>(dd)]));
            }
            if (!zero && r2 < sqr(cube.side)) offsets.push_back(cur);
            return;
        }
        for (long v = -reach; v <= reach; ++v) {
            cur[static_cast<std::size_t>(d)] = v;
            rec(d + 1);
        }
    };
    rec(0);

    KahanSum acc;
    std::array<std::size_t, 3> idx{};
    for (const auto& off : offsets) {
        double r2 = 0.0;
        for (int d = 0; d < n; ++d) r2 += sqr(h * static_cast<double>(off[static_cast<std::size_t>(d)]));
        double wy = std::pow(std::sqrt(r2), -expo);
        KahanSum inner;
        for (std::size_t ptIdx = 0; ptIdx < pts.size(); ++ptIdx) {
            std::size_t a = pts[ptIdx];
            g.decode(a, idx);
            std::array<std::size_t, 3> nb = idx;
            for (int d = 0; d < n; ++d) {
                long v = (static_cast<long>(idx[static_cast<std::size_t>(d)]) +
                          off[static_cast<std::size_t>(d)] + ntot) % ntot;
                nb[static_cast<std::size_t>(d)] = static_cast<std::size_t>(v);
            }
            double diff = phys[g.encode(nb)] - phys[a];
            inner.add(diff * diff);
        }
        acc.add(inner.value() * wy * h2n);
    }
    return acc.value();
}

double q_cube_weighted(const std::vector<double>& phys, const TorusGrid& g, double alpha,
                       double beta, const CubeFamily& fam, const Cube& cube) {
    FracParams p(alpha, beta, beta >= 1.0);
    double u = q_cube_value(phys, g, p, fam, cube);
    double w = std::pow(cube.side, 2.0 * (alpha + beta - 1.0) - static_cast<double>(g.dim()));
    return w * u;
}

namespace {

NormReport q_norm_impl(const SpectralField& f, const FracParams& p, const CubeFamily& cubes,
                       int threads, bool translated) {
    require(f.components() == 1, "q_norm: scalar field expected");
    const TorusGrid& g = f.grid();
    auto phys = f.to_physical();
    const auto& list = cubes.cubes();
    std::vector<double> values(list.size(), 0.0);
    parallel_chunks(
        list.size(), 4,
        [&](std::size_t, std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                double u = translated ? q_cube_translated_value(phys, g, p, cubes, list[i])
                                      : q_cube_value(phys, g, p, cubes, list[i]);
                values[i] = std::pow(list[i].side,
                                     2.0 * (p.alpha + p.beta - 1.0) - static_cast<double>(g.dim())) *
                            u;
            }
        },
        threads);
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;

    NormReport rep;
    rep.norm_name = translated ? "q_translated" : "q";
    rep.value = std::sqrt(std::max(0.0, values[best]));
    rep.witness.kind = "cube";
    rep.witness.center = list[best].center;
    rep.witness.scale = list[best].side;
    rep.alpha = p.alpha;
    rep.beta = p.beta;
    rep.set_grid(g);
    rep.convention_notes = {kMeanModeNote,
                            translated ? "translated-difference form over grid offsets |y| < l(I)"
                                       : "double-difference form, diagonal sample pairs excluded"};
    rep.quadrature_grid = "rectangle rule on the uniform grid";
    rep.excluded_diagonal = !translated;
    rep.rates = {{"diagonal_midpoint_rate_h_exponent", 2.0 * (p.beta - p.alpha)}};
    return rep;
}

}  // namespace

NormReport q_norm(const SpectralField& f, const FracParams& p, const CubeFamily& cubes,
                  int threads) {
    return q_norm_impl(f, p, cubes, threads, false);
}

NormReport q_norm_translated(const SpectralField& f, const FracParams& p, const CubeFamily& cubes,
                             int threads) {
    NormReport rep = q_norm_impl(f, p, cubes, threads, true);
    double base = q_norm_impl(f, p, cubes, threads, false).value;
    if (base > 0.0) rep.rates.emplace_back("ratio_to_q_norm", rep.value / base);
    return rep;
}

NormReport bmo_beta_norm(const SpectralField& f, double beta, const CubeFamily& cubes) {
    require(f.components() == 1, "bmo_beta_norm: scalar field expected");
    require(beta > 0.5 && beta <= 1.0, "bmo_beta_norm: beta in (1/2,1]");
    const TorusGrid& g = f.grid();
    auto phys = f.to_physical();
    const double hn = std::pow(g.spacing(), g.dim());
    double bestval = -1.0;
    std::size_t best = 0;
    const auto& list = cubes.cubes();
    for (std::size_t i = 0; i < list.size(); ++i) {
        auto pts = cubes.samples(list[i]);
        KahanSum mean;
        for (auto a : pts) mean.add(phys[a]);
        double mu = mean.value() / static_cast<double>(pts.size());
        KahanSum osc;
        for (auto a : pts) osc.add(sqr(phys[a] - mu) * hn);
        double vol = std::pow(list[i].side, g.dim());
        double val = std::pow(vol, -1.0 + 4.0 * (beta - 1.0) / static_cast<double>(g.dim())) *
                     osc.value();
        if (val > bestval) {
            bestval = val;
            best = i;
        }
    }
    NormReport rep;
    rep.norm_name = "bmo_beta";
    rep.value = std::sqrt(std::max(0.0, bestval));
    rep.witness.kind = "cube";
    rep.witness.center = list[best].center;
    rep.witness.scale = list[best].side;
    rep.alpha = -0.5 * g.dim() + beta - 1.0;
    rep.beta = beta;
    rep.set_grid(g);
    rep.convention_notes = {kMeanModeNote, "mean-oscillation form"};
    rep.quadrature_grid = "rectangle rule on the uniform grid";
    return rep;
}

namespace {

/// shared Carleson sup over balls for a squared-magnitude half-space table;
/// data(it, ix) must already be |...|^2; gamma is the t-weight exponent and
/// extra_t_power multiplies the data by t^extra at each node (for peeled or
/// derivative weights). s_cap(r) gives the upper time limit per radius.
struct CarlesonSupResult {
    double sup = 0.0;
    std::size_t ball = 0;
};

template <typename DataFn, typename SCapFn>
CarlesonSupResult carleson_sup(const TorusGrid& g, const BallFamily& balls, const TimeGrid& tg,
                               const FracParams& p, double gamma, DataFn&& data, SCapFn&& s_cap,
                               double r_cap) {
    const double hn = std::pow(g.spacing(), g.dim());
    CarlesonSupResult out;
    out.sup = -1.0;
    for (std::size_t bi = 0; bi < balls.size(); ++bi) {
        const Ball& b = balls.balls()[bi];
        if (b.radius > r_cap * (1.0 + 1e-12)) continue;
        const auto& pts = balls.samples(bi);
        const double s_max = s_cap(b.radius);
        KahanSum acc;
        for (std::size_t it = 0; it < tg.size(); ++it) {
            double w = tg.weight(it, gamma, s_max);
            if (w == 0.0) continue;
            KahanSum spatial;
            for (auto ix : pts) spatial.add(data(it, ix));
            acc.add(w * spatial.value() * hn);
        }
        double val = std::pow(b.radius, 2.0 * p.alpha - static_cast<double>(g.dim()) +
                                            2.0 * p.beta - 2.0) *
                     acc.value();
        if (val > out.sup) {
            out.sup = val;
            out.ball = bi;
        }
    }
    require(out.sup >= 0.0, "carleson_sup: no admissible ball in the family");
    return out;
}

}  // namespace

NormReport carleson_q_inverse_norm(const SpectralField& f, const FracParams& p,
                                   const BallFamily& balls, const CarlesonOptions& opt) {
    const TorusGrid& g = f.grid();
    HalfSpaceSample ext = heat_extension(f, opt.tgrid, p.beta);
    const double gamma = p.alpha / p.beta;
    const double r_cap = opt.range == RadiusRange::RPow2Beta
                             ? std::pow(opt.horizon, 1.0 / (2.0 * p.beta))
                             : opt.horizon;
    auto res = carleson_sup(
        g, balls, opt.tgrid, p, gamma, [&](std::size_t it, std::size_t ix) { return ext.mag2(it, ix); },
        [&](double r) { return std::pow(r, 2.0 * p.beta); }, r_cap);
    NormReport rep;
    rep.norm_name = "q_inverse_carleson";
    rep.value = std::sqrt(std::max(0.0, res.sup));
    rep.witness.kind = "ball";
    rep.witness.center = balls.balls()[res.ball].center;
    rep.witness.scale = balls.balls()[res.ball].radius;
    rep.alpha = p.alpha;
    rep.beta = p.beta;
    rep.horizon = opt.horizon;
    rep.set_grid(g);
    rep.convention_notes = {kMeanModeNote, range_note(opt.range),
                            "time integral: geometric cells, exact power weights"};
    rep.quadrature_grid = "geometric time grid x rectangle rule";
    return rep;
}

NormReport semigroup_carleson_norm(const SpectralField& f, const FracParams& p,
                                   const BallFamily& balls, const CarlesonOptions& opt) {
    const TorusGrid& g = f.grid();
    // |grad e^{-tA} f|^2 per node
    std::vector<SpectralField> slices;
    slices.reserve(opt.tgrid.size());
    for (std::size_t i = 0; i < opt.tgrid.size(); ++i) {
        SpectralField u = heat_semigroup(f, opt.tgrid.node(i), p.beta);
        SpectralField grad(g, g.dim(), u.is_real());
        for (int d = 0; d < g.dim(); ++d) {
            SpectralField dd = partial_derivative(u, d);
            for (std::size_t ix = 0; ix < g.total(); ++ix) grad.coeff(d, ix) = dd.coeff(0, ix);
        }
        slices.push_back(std::move(grad));
    }
    HalfSpaceSample ext = HalfSpaceSample::from_fields(opt.tgrid, slices);
    const double gamma = p.alpha / p.beta;
    const double r_cap = opt.range == RadiusRange::RPow2Beta
                             ? std::pow(opt.horizon, 1.0 / (2.0 * p.beta))
                             : opt.horizon;
    auto res = carleson_sup(
        g, balls, opt.tgrid, p, gamma, [&](std::size_t it, std::size_t ix) { return ext.mag2(it, ix); },
        [&](double r) { return std::pow(r, 2.0 * p.beta); }, r_cap);
    NormReport rep;
    rep.norm_name = "semigroup_carleson";
    rep.value = std::sqrt(std::max(0.0, res.sup));
    rep.witness.kind = "ball";
    rep.witness.center = balls.balls()[res.ball].center;
    rep.witness.scale = balls.balls()[res.ball].radius;
    rep.alpha = p.alpha;
    rep.beta = p.beta;
    rep.horizon = opt.horizon;
    rep.set_grid(g);
    rep.convention_notes = {kMeanModeNote, range_note(opt.range)};
    rep.quadrature_grid = "geometric time grid x rectangle rule";
    return rep;
}

NormReport XNormReport::to_report(const FracParams& p, const TorusGrid& g, double T) const {
    NormReport rep;
    rep.norm_name = "x_norm";
    rep.value = value;
    rep.witness = carleson_witness;
    rep.alpha = p.alpha;
    rep.beta = p.beta;
    rep.horizon = T;
    rep.set_grid(g);
    rep.convention_notes = {kMeanModeNote, "sum of sup-part and Carleson part",
                            range_note(RadiusRange::RPow2Beta)};
    rep.quadrature_grid = "geometric time grid x rectangle rule";
    return rep;
}

XNormReport x_norm(const HalfSpaceSample& g, const FracParams& p, const BallFamily& balls,
                   double horizon, RadiusRange range) {
    const TorusGrid& sg = g.sgrid();
    const TimeGrid& tg = g.tgrid();
    XNormReport out;
    // sup-part over time nodes within the horizon
    double best_linf = -1.0;
    std::size_t best_it = 0;
    for (std::size_t it = 0; it < tg.size(); ++it) {
        double t = tg.node(it);
        if (t > horizon * (1.0 + 1e-12)) continue;
        double m = 0.0;
        for (std::size_t ix = 0; ix < sg.total(); ++ix) m = std::max(m, g.mag2(it, ix));
        double val = std::pow(t, 1.0 - 1.0 / (2.0 * p.beta)) * std::sqrt(m);
        if (val > best_linf) {
            best_linf = val;
            best_it = it;
        }
    }
    out.linf_part = std::max(0.0, best_linf);
    out.linf_witness.kind = "time";
    out.linf_witness.time = tg.node(best_it);

    const double gamma = p.alpha / p.beta;
    const double r_cap = range == RadiusRange::RPow2Beta ? std::pow(horizon, 1.0 / (2.0 * p.beta))
                                                         : horizon;
    auto res = carleson_sup(
        sg, balls, tg, p, gamma, [&](std::size_t it, std::size_t ix) { return g.mag2(it, ix); },
        [&](double r) { return std::pow(r, 2.0 * p.beta); }, r_cap);
    out.carleson_part = std::sqrt(std::max(0.0, res.sup));
    out.carleson_witness.kind = "ball";
    out.carleson_witness.center = balls.balls()[res.ball].center;
    out.carleson_witness.scale = balls.balls()[res.ball].radius;
    out.value = out.linf_part + out.carleson_part;
    return out;
}

NkNorms nk_norms(const std::vector<SpectralField>& slices, const TimeGrid& tg,
                 const FracParams& p, int k, const BallFamily& balls) {
    require(!slices.empty() && slices.size() == tg.size(), "nk_norms: one slice per node");
    const TorusGrid& g = slices[0].grid();
    require(std::pow(g.xi_max(), k) <= 1e6,
            "nk_norms: k too large for grid resolution (multiplier amplification over 1e6)");
    const int n = g.dim();

    double best_inf = -1.0;
    Witness w_inf;
    double best_car = -1.0;
    Witness w_car;

    std::array<int, 3> gamma_idx{};
    std::function<void(int, int)> loop = [&](int axis, int rem) {
        if (axis == n - 1) {
            gamma_idx[static_cast<std::size_t>(axis)] = rem;
            // derivative slices for this multi-index
            std::vector<SpectralField> d_slices;
            d_slices.reserve(slices.size());
            for (const auto& s : slices) {
                SpectralField d = s;
                for (int a = 0; a < n; ++a)
                    for (int rep = 0; rep < gamma_idx[static_cast<std::size_t>(a)]; ++rep)
                        d = partial_derivative(d, a);
                d_slices.push_back(std::move(d));
            }
            std::string tag = "multi_index=" + std::to_string(gamma_idx[0]) + "," +
                              std::to_string(gamma_idx[1]) + "," + std::to_string(gamma_idx[2]);
            // sup part
            for (std::size_t it = 0; it < tg.size(); ++it) {
                double val = std::pow(tg.node(it), (2.0 * p.beta - 1.0 + k) / (2.0 * p.beta)) *
                             d_slices[it].linf_norm();
                if (val > best_inf) {
                    best_inf = val;
                    w_inf.kind = "time";
                    w_inf.time = tg.node(it);
                    w_inf.detail = tag;
                }
            }
            // Carleson part with data t^{k/beta} |d|^2
            HalfSpaceSample hs = HalfSpaceSample::from_fields(tg, d_slices);
            auto res = carleson_sup(
                g, balls, tg, p, p.alpha / p.beta,
                [&](std::size_t it, std::size_t ix) {
                    return std::pow(tg.node(it), static_cast<double>(k) / p.beta) * hs.mag2(it, ix);
                },
                [&](double r) { return std::pow(r, 2.0 * p.beta); },
                std::numeric_limits<double>::infinity());
            if (res.sup > best_car) {
                best_car = res.sup;
                w_car.kind = "ball";
                w_car.center = balls.balls()[res.ball].center;
                w_car.scale = balls.balls()[res.ball].radius;
                w_car.detail = tag;
            }
            return;
        }
        for (int j = 0; j <= rem; ++j) {
            gamma_idx[static_cast<std::size_t>(axis)] = j;
            loop(axis + 1, rem - j);
        }
    };
    loop(0, k);

    NkNorms out;
    out.n_inf.norm_name = "nk_inf_k" + std::to_string(k);
    out.n_inf.value = std::max(0.0, best_inf);
    out.n_inf.witness = w_inf;
    out.n_inf.alpha = p.alpha;
    out.n_inf.beta = p.beta;
    out.n_inf.set_grid(g);
    out.n_inf.convention_notes = {kMeanModeNote};
    out.n_inf.quadrature_grid = "geometric time grid";
    out.n_carleson.norm_name = "nk_carleson_k" + std::to_string(k);
    out.n_carleson.value = std::sqrt(std::max(0.0, best_car));
    out.n_carleson.witness = w_car;
    out.n_carleson.alpha = p.alpha;
    out.n_carleson.beta = p.beta;
    out.n_carleson.set_grid(g);
    out.n_carleson.convention_notes = {kMeanModeNote, range_note(RadiusRange::RPow2Beta)};
    out.n_carleson.quadrature_grid = "geometric time grid x rectangle rule";
    return out;
}

NormReport wavelet_carleson_norm(const SpectralField& f, const Window& phi, const FracParams& p,
                                 const BallFamily& balls, const TimeGrid& tg) {
    auto cert = validate_window(phi, f.grid().dim());
    require(cert.pass(), "wavelet_carleson_norm: window failed admissibility checks");
    const TorusGrid& g = f.grid();
    // peel t^2 out of |f * phi_t|^2: the zero-mean symbol vanishes linearly,
    // so the peeled data is bounded and the cell weights stay integrable.
    std::vector<SpectralField> slices;
    slices.reserve(tg.size());
    for (std::size_t i = 0; i < tg.size(); ++i)
        slices.push_back(window_convolve(f, phi, tg.node(i)));
    HalfSpaceSample hs = HalfSpaceSample::from_fields(tg, slices);
    const double gamma = 1.0 + 2.0 * (p.alpha - p.beta + 1.0);
    auto res = carleson_sup(
        g, balls, tg, p, gamma - 2.0,
        [&](std::size_t it, std::size_t ix) { return hs.mag2(it, ix) / sqr(tg.node(it)); },
        [&](double r) { return r; }, std::numeric_limits<double>::infinity());
    NormReport rep;
    rep.norm_name = "wavelet_carleson[" + phi.name + "]";
    rep.value = std::sqrt(std::max(0.0, res.sup));
    rep.witness.kind = "ball";
    rep.witness.center = balls.balls()[res.ball].center;
    rep.witness.scale = balls.balls()[res.ball].radius;
    rep.alpha = p.alpha;
    rep.beta = p.beta;
    rep.set_grid(g);
    rep.convention_notes = {kMeanModeNote, "scale integral over t in (0,r)",
                            "t^2 peeled from |f*phi_t|^2 before power-cell integration"};
    rep.quadrature_grid = "geometric scale grid x rectangle rule";
    return rep;
}

NormReport p_carleson_norm(const HalfSpaceSample& mu, double p_exp, const CubeFamily& cubes) {
    require(mu.components() == 1, "p_carleson_norm: scalar measure density expected");
    for (double v : mu.raw())
        require(v >= 0.0, "p_carleson_norm: measure density must be nonnegative");
    const TorusGrid& g = mu.sgrid();
    const TimeGrid& tg = mu.tgrid();
    const double hn = std::pow(g.spacing(), g.dim());
    double best = -1.0;
    std::size_t besti = 0;
    const auto& list = cubes.cubes();
    for (std::size_t i = 0; i < list.size(); ++i) {
        auto pts = cubes.samples(list[i]);
        KahanSum acc;
        for (std::size_t it = 0; it < tg.size(); ++it) {
            double w = tg.weight(it, 0.0, list[i].side);
            if (w == 0.0) continue;
            KahanSum spatial;
            for (auto ix : pts) spatial.add(mu.at(it, 0, ix));
            acc.add(w * spatial.value() * hn);
        }
        double val = acc.value() / std::pow(list[i].side, static_cast<double>(g.dim()) * p_exp);
        if (val > best) {
            best = val;
            besti = i;
        }
    }
    NormReport rep;
    rep.norm_name = "p_carleson";
    rep.value = std::max(0.0, best);
    rep.witness.kind = "cube";
    rep.witness.center = list[besti].center;
    rep.witness.scale = list[besti].side;
    rep.alpha = p_exp;  // exponent recorded in the alpha slot
    rep.beta = 0.0;
    rep.set_grid(g);
    rep.convention_notes = {"Carleson boxes S(I) = (0, l(I)) x I", "plain dt cell measures"};
    rep.quadrature_grid = "geometric time grid x rectangle rule";
    return rep;
}

PoincareReport poincare_check(const SpectralField& psi, const Cube& cube, const CubeFamily& fam,
                              double alpha1, double alpha2, double beta) {
    require(0.0 <= alpha1 && alpha1 <= alpha2 && alpha2 < beta,
            "poincare_check: need 0 <= alpha1 <= alpha2 < beta");
    const TorusGrid& g = psi.grid();
    const int n = g.dim();
    auto phys = psi.to_physical();
    auto pts = fam.samples(cube);
    const double hn = std::pow(g.spacing(), n);
    const double diam = std::sqrt(static_cast<double>(n)) * cube.side;

    KahanSum mean;
    for (auto a : pts) mean.add(phys[a]);
    double mu = mean.value() / static_cast<double>(pts.size());
    KahanSum osc;
    for (auto a : pts) osc.add(sqr(phys[a] - mu) * hn);

    PoincareReport rep;
    rep.lhs = std::sqrt(osc.value());

    const double nq = std::pow(static_cast<double>(n), 0.25 * n);
    FracParams p1(alpha1, beta, beta >= 1.0);
    FracParams p2(alpha2, beta, beta >= 1.0);
    double u1 = q_cube_value(phys, g, p1, fam, cube);
    double u2 = q_cube_value(phys, g, p2, fam, cube);
    rep.mid_alpha1 = nq * std::pow(diam, alpha1 - beta + 1.0) * std::sqrt(u1);
    rep.mid_alpha2 = nq * std::pow(diam, alpha2 - beta + 1.0) * std::sqrt(u2);

    // gradient side
    KahanSum gacc;
    for (int d = 0; d < n; ++d) {
        auto dphys = partial_derivative(psi, d).to_physical();
        for (auto a : pts) gacc.add(sqr(dphys[a]) * hn);
    }
    rep.grad_side = diam * std::sqrt(gacc.value());

    const double tol = 1e-12;
    rep.chain_ok = rep.lhs <= rep.mid_alpha1 * (1.0 + tol) + tol &&
                   rep.mid_alpha1 <= rep.mid_alpha2 * (1.0 + tol) + tol;
    rep.fitted_last = rep.grad_side > 0.0 ? rep.mid_alpha2 / rep.grad_side : 0.0;
    return rep;
}

RieszReport riesz_stability_check(const SpectralField& f, const FracParams& p,
                                  const BallFamily& balls, const CarlesonOptions& opt) {
    require(f.components() == 1, "riesz_stability_check: scalar field expected");
    require(std::abs(f.coeff(0, 0)) < 1e-14 * (f.coeff_max() + 1e-300),
            "riesz_stability_check: field must have zero mean");
    double base = carleson_q_inverse_norm(f, p, balls, opt).value;
    require(base > 0.0, "riesz_stability_check: zero norm input rejected");
    const TorusGrid& g = f.grid();
    const int n = g.dim();
    RieszReport rep;
    std::array<long, 3> k{};
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            SpectralField fjk = f;
            fjk.apply_multiplier([&](std::size_t i) -> cplx {
                g.wavevector(i, k);
                double x2 = g.xi_norm2(i);
                if (x2 == 0.0) return cplx{0.0, 0.0};
                return cplx{-g.xi_of(k[static_cast<std::size_t>(j)]) *
                                g.xi_of(k[static_cast<std::size_t>(l)]) / x2,
                            0.0};
            });
            double val = carleson_q_inverse_norm(fjk, p, balls, opt).value;
            rep.ratios.push_back(val / base);
        }
    rep.max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
    return rep;
}

DivRepReport divergence_representation_check(const SpectralField& f, const FracParams& p,
                                             const CubeFamily& cubes, const BallFamily& balls,
                                             const CarlesonOptions& opt, int threads) {
    require(f.components() == 1, "divergence_representation_check: scalar field expected");
    const TorusGrid& g = f.grid();
    const int n = g.dim();
    std::array<long, 3> k{};
    std::vector<SpectralField> comps;
    for (int d = 0; d < n; ++d) {
        SpectralField fd = f;
        fd.apply_multiplier([&](std::size_t i) -> cplx {
            g.wavevector(i, k);
            double x2 = g.xi_norm2(i);
            if (x2 == 0.0) return cplx{0.0, 0.0};
            return cplx{0.0, -g.xi_of(k[static_cast<std::size_t>(d)]) / x2};
        });
        comps.push_back(std::move(fd));
    }
    SpectralField recon(g, 1, f.is_real());
    for (int d = 0; d < n; ++d) {
        auto dd = partial_derivative(comps[static_cast<std::size_t>(d)], 0 + d);
        for (std::size_t i = 0; i < g.total(); ++i) recon.coeff(0, i) += dd.coeff(0, i);
    }
    SpectralField diff = recon;
    SpectralField fm = f;
    fm.zero_mean();
    diff -= fm;

    DivRepReport rep;
    double scale = fm.coeff_max();
    rep.reconstruction_rel_error = scale > 0.0 ? diff.coeff_max() / scale : 0.0;
    rep.q_inverse_norm = carleson_q_inverse_norm(f, p, balls, opt).value;
    KahanSum s;
    for (int d = 0; d < n; ++d) s.add(q_norm(comps[static_cast<std::size_t>(d)], p, cubes, threads).value);
    rep.sum_component_q_norms = s.value();
    rep.ratio = rep.sum_component_q_norms > 0.0 ? rep.q_inverse_norm / rep.sum_component_q_norms : 0.0;
    return rep;
}

EmbeddingReport embedding_check(const SpectralField& f, EmbeddingPair pair, const FracParams& p,
                                const CubeFamily& cubes, const BallFamily& balls,
                                const CarlesonOptions& opt, int threads) {
    EmbeddingReport rep;
    if (f.coeff_max() == 0.0) {
        rep.skipped = true;
        return rep;
    }
    const TorusGrid& g = f.grid();
    const double n = static_cast<double>(g.dim());
    LittlewoodPaleyBank bank(g);
    switch (pair) {
        case EmbeddingPair::BesovToQ: {
            // gamma1 - gamma2 = 2 - 2 beta, gamma1 > alpha - beta + 1, gamma2 > 0
            double gamma2 = std::max(0.2, p.alpha - p.beta + 1.0 + 0.1 - (2.0 - 2.0 * p.beta));
            double gamma1 = gamma2 + 2.0 - 2.0 * p.beta;
            require(gamma1 > p.alpha - p.beta + 1.0 && gamma2 > 0.0,
                    "embedding_check: hypothesis violation for the Besov-to-Q pair");
            rep.source_norm = bank.besov_norm(f, gamma1, n / gamma2, 2.0);
            rep.target_norm = q_norm(f, p, cubes, threads).value;
            break;
        }
        case EmbeddingPair::BesovToQInverse: {
            // alpha + beta < 1 + n/pp < 2 beta with 2 < pp < infinity
            double lo = p.alpha + p.beta, hi = 2.0 * p.beta;
            require(lo < hi, "embedding_check: empty hypothesis window");
            double target = 0.5 * (lo + hi);  // 1 + n/pp
            double pp = n / (target - 1.0);
            require(pp > 2.0, "embedding_check: hypothesis violation (p must exceed 2)");
            double s = 1.0 + n / pp - 2.0 * p.beta;
            rep.source_norm = bank.besov_norm(f, s, pp, 2.0);
            rep.target_norm = carleson_q_inverse_norm(f, p, balls, opt).value;
            break;
        }
        case EmbeddingPair::QInverseToBesovInfty: {
            rep.source_norm = carleson_q_inverse_norm(f, p, balls, opt).value;
            rep.target_norm = bank.besov_norm(f, 1.0 - 2.0 * p.beta, 0.0, 0.0);
            break;
        }
    }
    if (rep.source_norm == 0.0) {
        rep.skipped = true;
        return rep;
    }
    rep.ratio = rep.target_norm / rep.source_norm;
    return rep;
}

}  // namespace qnslab
