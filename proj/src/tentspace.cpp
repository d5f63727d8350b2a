#include "qnslab/tentspace.hpp"

#include <map>
#include <set>

namespace qnslab {

namespace {

double unit_ball_volume(int n) {
    switch (n) {
        case 1: return 2.0;
        case 2: return PI;
        default: return 4.0 * PI / 3.0;
    }
}

double dist_to_center(const TorusGrid& g, std::size_t ix, const std::array<double, 3>& c) {
    std::array<double, 3> x{};
    g.coords(ix, x);
    return g.torus_dist(x, c);
}

}  // namespace

bool in_tent(const TorusGrid& g, const Ball& b, double t, std::size_t ix) {
    return dist_to_center(g, ix, b.center) <= b.radius - t;
}

NormReport t_infty_norm(const HalfSpaceSample& F, const FracParams& p, const BallFamily& balls) {
    require(p.tent_admissible(), "t_infty_norm: requires alpha + beta - 1 >= 0");
    const TorusGrid& g = F.sgrid();
    const TimeGrid& tg = F.tgrid();
    const int n = g.dim();
    const double gamma = 1.0 + 2.0 * (p.alpha - p.beta + 1.0);
    const double hn = std::pow(g.spacing(), n);
    double best = -1.0;
    std::size_t besti = 0;
    for (std::size_t bi = 0; bi < balls.size(); ++bi) {
        const Ball& b = balls.balls()[bi];
        KahanSum acc;
        for (std::size_t it = 0; it < tg.size(); ++it) {
            double t = tg.node(it);
            if (t > b.radius) continue;
            double w = tg.weight(it, gamma, b.radius);
            if (w == 0.0) continue;
            KahanSum spatial;
            for (auto ix : balls.samples(bi))
                if (in_tent(g, b, t, ix)) spatial.add(F.mag2(it, ix));
            acc.add(w * spatial.value() * hn);
        }
        double vol = unit_ball_volume(n) * std::pow(b.radius, n);
        double val = std::pow(vol, -1.0 + 2.0 * (p.alpha + p.beta - 1.0) / n) * acc.value();
        if (val > best) {
            best = val;
            besti = bi;
        }
    }
    NormReport rep;
    rep.norm_name = "t_infty";
    rep.value = std::sqrt(std::max(0.0, best));
    rep.witness.kind = "ball";
    rep.witness.center = balls.balls()[besti].center;
    rep.witness.scale = balls.balls()[besti].radius;
    rep.alpha = p.alpha;
    rep.beta = p.beta;
    rep.set_grid(g);
    rep.convention_notes = {"|B| is the continuum ball volume",
                            "weight exponent >= 1: first time cell truncated at its geometric edge"};
    rep.quadrature_grid = "geometric time grid x rectangle rule";
    return rep;
}

std::vector<double> nontangential_max(const HalfSpaceSample& F) {
    const TorusGrid& g = F.sgrid();
    const TimeGrid& tg = F.tgrid();
    const long nax = static_cast<long>(g.n_axis());
    std::vector<double> out(g.total(), 0.0);
    // per time slice, max |F(t,y)| over torus distance |y - x| < t
    for (std::size_t it = 0; it < tg.size(); ++it) {
        const double t = tg.node(it);
        std::vector<std::array<long, 3>> offs;
        const long reach = std::min<long>(nax / 2,
                                          static_cast<long>(std::ceil(t / g.spacing())));
        std::array<long, 3> cur{};
        std::function<void(int)> rec = [&](int d) {
            if (d == g.dim()) {
                double r2 = 0.0;
                for (int dd = 0; dd < g.dim(); ++dd)
                    r2 += sqr(g.spacing() * static_cast<double>(cur[static_cast<std::size_t>(dd)]));
                if (std::sqrt(r2) < t) offs.push_back(cur);
                return;
            }
            for (long v = -reach; v <= reach; ++v) {
                cur[static_cast<std::size_t>(d)] = v;
                rec(d + 1);
            }
        };
        rec(0);
        std::array<std::size_t, 3> xi{}, yi{};
        for (std::size_t ix = 0; ix < g.total(); ++ix) {
            g.decode(ix, xi);
            double m = out[ix];
            for (const auto& o : offs) {
                for (int dd = 0; dd < g.dim(); ++dd)
                    yi[static_cast<std::size_t>(dd)] = static_cast<std::size_t>(
                        ((static_cast<long>(xi[static_cast<std::size_t>(dd)]) +
                          o[static_cast<std::size_t>(dd)]) % nax + nax) % nax);
                m = std::max(m, std::sqrt(F.mag2(it, g.encode(yi))));
            }
            out[ix] = m;
        }
    }
    return out;
}

namespace {

struct TreeWalk {
    const TorusGrid* g;
    int max_level;
    // per-level number of samples per axis inside one cube
    long count_in(const DyadicCube& c, const std::vector<bool>& set) const {
        long cnt = 0;
        for (auto ix : dyadic_cube_samples(*g, c))
            if (set[ix]) ++cnt;
        return cnt;
    }
};

void enumerate_cubes(const TorusGrid& g, int level, const std::function<void(const DyadicCube&)>& f) {
    long per = 1L << level;
    std::array<long, 3> idx{};
    std::function<void(int)> rec = [&](int d) {
        if (d == g.dim()) {
            DyadicCube c;
            c.level = level;
            c.index = idx;
            f(c);
            return;
        }
        for (long i = 0; i < per; ++i) {
            idx[static_cast<std::size_t>(d)] = i;
            rec(d + 1);
        }
    };
    rec(0);
}

}  // namespace

CapacityResult hausdorff_capacity(const TorusGrid& g, const std::vector<bool>& set, double d) {
    require(d > 0.0 && d <= static_cast<double>(g.dim()), "hausdorff_capacity: d in (0, n]");
    require(set.size() == g.total(), "hausdorff_capacity: mask shape mismatch");
    bool any = false;
    for (bool b : set) any = any || b;
    require(any, "hausdorff_capacity: empty set");

    const int max_level = static_cast<int>(std::log2(static_cast<double>(g.n_axis())));

    // greedy cover, highest gain per cost first
    std::vector<bool> uncovered = set;
    std::size_t remaining = 0;
    for (bool b : uncovered)
        if (b) ++remaining;
    DyadicCover cover;
    KahanSum cost;
    while (remaining > 0) {
        double best_gain = -1.0;
        DyadicCube best;
        for (int lvl = 0; lvl <= max_level; ++lvl) {
            enumerate_cubes(g, lvl, [&](const DyadicCube& c) {
                long cnt = 0;
                for (auto ix : dyadic_cube_samples(g, c))
                    if (uncovered[ix]) ++cnt;
                if (cnt == 0) return;
                double gain = static_cast<double>(cnt) / std::pow(c.side(g), d);
                if (gain > best_gain) {
                    best_gain = gain;
                    best = c;
                }
            });
        }
        for (auto ix : dyadic_cube_samples(g, best))
            if (uncovered[ix]) {
                uncovered[ix] = false;
                --remaining;
            }
        cover.cubes.push_back(best);
        cost.add(std::pow(best.side(g), d));
    }
    cover.cost = cost.value();

    // lower bound: best dyadic cube entirely inside the set
    double lower = 0.0;
    for (int lvl = 0; lvl <= max_level; ++lvl) {
        enumerate_cubes(g, lvl, [&](const DyadicCube& c) {
            auto pts = dyadic_cube_samples(g, c);
            for (auto ix : pts)
                if (!set[ix]) return;
            lower = std::max(lower, std::pow(c.side(g), d));
        });
    }
    return CapacityResult{std::move(cover), lower};
}

namespace {

/// Minimal-cost dyadic cover of set restricted to `cube`, appended to `out`.
/// The dyadic tree is laminar, so a bottom-up min over (own cube) versus
/// (children's optimal covers) is an exhaustive search over all covers.
double exact_cover(const TorusGrid& g, const std::vector<bool>& set, double d,
                   const DyadicCube& cube, std::vector<DyadicCube>& out) {
    bool nonempty = false;
    for (auto ix : dyadic_cube_samples(g, cube))
        if (set[ix]) nonempty = true;
    if (!nonempty) return 0.0;
    const int max_level = static_cast<int>(std::log2(static_cast<double>(g.n_axis())));
    const double own = std::pow(cube.side(g), d);
    if (cube.level == max_level) {
        out.push_back(cube);
        return own;
    }
    std::vector<DyadicCube> kid_cubes;
    double kid_cost = 0.0;
    std::array<long, 3> kidx{};
    std::function<void(int)> rec = [&](int dd) {
        if (dd == g.dim()) {
            DyadicCube k;
            k.level = cube.level + 1;
            k.index = kidx;
            kid_cost += exact_cover(g, set, d, k, kid_cubes);
            return;
        }
        for (long b = 0; b < 2; ++b) {
            kidx[static_cast<std::size_t>(dd)] = 2 * cube.index[static_cast<std::size_t>(dd)] + b;
            rec(dd + 1);
        }
    };
    rec(0);
    if (own <= kid_cost) {
        out.push_back(cube);
        return own;
    }
    out.insert(out.end(), kid_cubes.begin(), kid_cubes.end());
    return kid_cost;
}

}  // namespace

double dyadic_capacity_exact(const TorusGrid& g, const std::vector<bool>& set, double d) {
    require(set.size() == g.total(), "dyadic_capacity_exact: mask shape mismatch");
    std::vector<DyadicCube> scratch;
    DyadicCube root;
    return exact_cover(g, set, d, root, scratch);
}

double choquet_integral(const TorusGrid& g, const std::vector<double>& f, double d,
                        int lambda_levels) {
    require(f.size() == g.total(), "choquet_integral: field shape mismatch");
    double fmax = 0.0;
    for (double v : f) {
        require(v >= 0.0, "choquet_integral: negative values");
        fmax = std::max(fmax, v);
    }
    if (fmax == 0.0) return 0.0;

    // lambda cells tile [0, fmax] with capacities at left edges. Few distinct
    // values: edges at the values themselves make the layer cake exact.
    // Otherwise a geometric grid gives a monotone upper estimate.
    std::vector<double> edges;
    std::vector<double> distinct = f;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (static_cast<int>(distinct.size()) <= 8 * lambda_levels) {
        edges.push_back(0.0);
        for (double v : distinct)
            if (v > 0.0) edges.push_back(v);
    } else {
        edges.push_back(0.0);
        const double lmin = fmax * 1e-6;
        for (int i = 0; i < lambda_levels; ++i)
            edges.push_back(lmin * std::pow(fmax / lmin, static_cast<double>(i) /
                                                             static_cast<double>(lambda_levels - 1)));
    }
    KahanSum acc;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double lo = edges[i];
        std::vector<bool> level(g.total());
        bool any = false;
        for (std::size_t ix = 0; ix < g.total(); ++ix) {
            level[ix] = f[ix] > lo;
            any = any || level[ix];
        }
        if (!any) break;
        double cap = hausdorff_capacity(g, level, d).upper.cost;
        acc.add(cap * (edges[i + 1] - lo));
    }
    return acc.value();
}

CapacitaryEmbeddingReport carleson_embedding_check(const HalfSpaceSample& mu,
                                                   const HalfSpaceSample& f, double d,
                                                   const CubeFamily& cubes) {
    require(mu.tgrid().size() == f.tgrid().size() && mu.sgrid() == f.sgrid(),
            "carleson_embedding_check: sample grids must match");
    const TorusGrid& g = mu.sgrid();
    const TimeGrid& tg = mu.tgrid();
    const double hn = std::pow(g.spacing(), g.dim());
    CapacitaryEmbeddingReport rep;
    KahanSum lhs;
    for (std::size_t it = 0; it < tg.size(); ++it) {
        double w = tg.weight(it, 0.0, tg.horizon());
        KahanSum spatial;
        for (std::size_t ix = 0; ix < g.total(); ++ix)
            spatial.add(std::sqrt(f.mag2(it, ix)) * mu.at(it, 0, ix));
        lhs.add(w * spatial.value() * hn);
    }
    rep.lhs = lhs.value();
    rep.measure_norm = p_carleson_norm(mu, d / static_cast<double>(g.dim()), cubes).value;
    auto nf = nontangential_max(f);
    rep.rhs = choquet_integral(g, nf, d);
    double denom = rep.measure_norm * rep.rhs;
    rep.ratio = denom > 0.0 ? rep.lhs / denom : 0.0;
    return rep;
}

AtomCertificate validate_atom(const TentAtom& a, const FracParams& p) {
    const TorusGrid& g = a.values.sgrid();
    const TimeGrid& tg = a.values.tgrid();
    const int n = g.dim();
    const double gamma = 1.0 - 2.0 * (p.alpha - p.beta + 1.0);
    const double hn = std::pow(g.spacing(), n);
    AtomCertificate cert;
    double leak = 0.0;
    KahanSum v;
    for (std::size_t it = 0; it < tg.size(); ++it) {
        double t = tg.node(it);
        double w = tg.weight(it, gamma, tg.horizon());
        for (std::size_t ix = 0; ix < g.total(); ++ix) {
            double m2 = a.values.mag2(it, ix);
            if (m2 == 0.0) continue;
            if (!in_tent(g, a.ball, t, ix)) leak = std::max(leak, std::sqrt(m2));
            else v.add(w * m2 * hn);
        }
    }
    cert.support_leak = leak;
    cert.support_ok = leak == 0.0;
    cert.norm_value = v.value();
    double vol = unit_ball_volume(n) * std::pow(a.ball.radius, n);
    cert.norm_budget = std::pow(vol, -1.0 + 2.0 * (p.alpha + p.beta - 1.0) / n);
    cert.margin = cert.norm_value > 0.0 ? cert.norm_budget / cert.norm_value : 0.0;
    return cert;
}

namespace {

/// distance from each point of the mask to its complement (torus metric);
/// infinity when the set is everything
std::vector<double> dist_to_complement(const TorusGrid& g, const std::vector<bool>& set) {
    std::vector<std::size_t> outside;
    for (std::size_t ix = 0; ix < g.total(); ++ix)
        if (!set[ix]) outside.push_back(ix);
    std::vector<double> rho(g.total(), std::numeric_limits<double>::infinity());
    if (outside.empty()) return rho;
    std::array<double, 3> xa{}, xb{};
    for (std::size_t ix = 0; ix < g.total(); ++ix) {
        if (!set[ix]) {
            rho[ix] = 0.0;
            continue;
        }
        g.coords(ix, xa);
        double best = std::numeric_limits<double>::infinity();
        for (auto oy : outside) {
            g.coords(oy, xb);
            best = std::min(best, g.torus_dist(xa, xb));
        }
        rho[ix] = best;
    }
    return rho;
}

}  // namespace

AtomicDecomposition atomic_decompose(const HalfSpaceSample& F, const HalfSpaceSample& omega,
                                     const FracParams& p) {
    require(p.tent_admissible(), "atomic_decompose: requires alpha + beta - 1 >= 0");
    const TorusGrid& g = F.sgrid();
    const TimeGrid& tg = F.tgrid();
    require(omega.sgrid() == g && omega.tgrid().size() == tg.size(),
            "atomic_decompose: F and omega must share grids");
    for (double v : omega.raw())
        require(v >= 0.0, "atomic_decompose: omega must be nonnegative");
    const int n = g.dim();
    const double d = p.capacity_dim(n);
    const double hn = std::pow(g.spacing(), n);
    const double gamma = 1.0 - 2.0 * (p.alpha - p.beta + 1.0);

    AtomicDecomposition out;
    double f_max = F.max_abs();
    if (f_max == 0.0) return out;

    // omega may vanish only where F vanishes
    double omega_min_on_support = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < tg.size(); ++it)
        for (std::size_t ix = 0; ix < g.total(); ++ix)
            if (F.mag2(it, ix) != 0.0) {
                double w = omega.at(it, 0, ix);
                require(w > 0.0, "atomic_decompose: omega vanishes where F does not");
                omega_min_on_support = std::min(omega_min_on_support, w);
            }

    auto n_omega = nontangential_max(omega);
    double n_max = 0.0;
    for (double v : n_omega) n_max = std::max(n_max, v);
    require(n_max > 0.0, "atomic_decompose: omega is identically zero");

    const int k_max = static_cast<int>(std::ceil(std::log2(n_max))) + 1;
    const int k_min = static_cast<int>(std::floor(std::log2(omega_min_on_support))) - 1;

    // per level: dyadic cover with the tent property
    struct LevelCover {
        int k;
        std::vector<DyadicCube> cubes;
        double cost = 0.0;
        double exact = 0.0;
    };
    std::vector<LevelCover> levels;
    const int grid_max_level = static_cast<int>(std::log2(static_cast<double>(g.n_axis())));
    for (int k = k_max; k >= k_min; --k) {
        std::vector<bool> ek(g.total(), false);
        bool any = false;
        for (std::size_t ix = 0; ix < g.total(); ++ix) {
            ek[ix] = n_omega[ix] > std::ldexp(1.0, k);
            any = any || ek[ix];
        }
        if (!any) continue;
        auto rho = dist_to_complement(g, ek);

        // exact minimal-cost cover, then Whitney promotion for the tents
        std::vector<DyadicCube> cover;
        DyadicCube root;
        double exact_cost = exact_cover(g, ek, d, root, cover);

        // promote cubes until 2 diam(I) exceeds every tent height over the cube
        std::set<DyadicCube> promoted;
        for (const auto& c : cover) {
            double need = 0.0;
            for (auto ix : dyadic_cube_samples(g, c))
                if (ek[ix]) need = std::max(need, std::min(rho[ix], tg.horizon()));
            DyadicCube cur = c;
            while (2.0 * std::sqrt(static_cast<double>(n)) * cur.side(g) <= need && cur.level > 0) {
                cur.level -= 1;
                for (int dd = 0; dd < n; ++dd) cur.index[static_cast<std::size_t>(dd)] >>= 1;
            }
            promoted.insert(cur);
        }
        // prune to maximal cubes (antichain)
        std::vector<DyadicCube> pruned;
        for (const auto& c : promoted) {
            bool covered = false;
            for (const auto& o : promoted)
                if (!(o == c) && o.contains(c)) covered = true;
            if (!covered) pruned.push_back(c);
        }
        LevelCover lc;
        lc.k = k;
        lc.cubes = std::move(pruned);
        for (const auto& c : lc.cubes) lc.cost += std::pow(c.side(g), d);
        lc.exact = exact_cost;
        levels.push_back(std::move(lc));
        (void)grid_max_level;
    }

    for (const auto& lc : levels)
        if (lc.exact > 0.0)
            out.max_cover_cost_ratio = std::max(out.max_cover_cost_ratio, lc.cost / lc.exact);

    // claim samples: S*(I) = {y in I, t < 2 diam(I)}, higher k first
    const std::size_t n_samples = tg.size() * g.total();
    std::vector<int> claim(n_samples, -1);  // atom id
    struct Region {
        DyadicCube cube;
        int k;
        std::vector<std::pair<std::size_t, std::size_t>> samples;  // (it, ix)
    };
    std::vector<Region> regions;
    for (const auto& lc : levels) {
        for (const auto& c : lc.cubes) {
            Region reg;
            reg.cube = c;
            reg.k = lc.k;
            double height = 2.0 * std::sqrt(static_cast<double>(n)) * c.side(g);
            auto pts = dyadic_cube_samples(g, c);
            for (std::size_t it = 0; it < tg.size(); ++it) {
                if (!(tg.node(it) < height)) continue;
                for (auto ix : pts) {
                    std::size_t s = it * g.total() + ix;
                    if (claim[s] >= 0) continue;
                    claim[s] = static_cast<int>(regions.size());
                    reg.samples.emplace_back(it, ix);
                }
            }
            regions.push_back(std::move(reg));
        }
    }

    // every sample carrying F must be claimed
    for (std::size_t it = 0; it < tg.size(); ++it)
        for (std::size_t ix = 0; ix < g.total(); ++ix)
            require(F.mag2(it, ix) == 0.0 || claim[it * g.total() + ix] >= 0,
                    "atomic_decompose: tent covers failed to capture the support");

    // assemble atoms
    KahanSum l1;
    HalfSpaceSample recon(tg, g, F.components());
    const double root_n = std::sqrt(static_cast<double>(n));
    for (const auto& reg : regions) {
        KahanSum sq;
        for (const auto& [it, ix] : reg.samples) {
            double w = tg.weight(it, gamma, tg.horizon());
            sq.add(w * F.mag2(it, ix) * hn);
        }
        if (sq.value() == 0.0) continue;
        const double l_star = 5.0 * root_n * reg.cube.side(g);
        double lam = std::sqrt(std::pow(l_star, static_cast<double>(n) - 2.0 * (p.alpha + p.beta - 1.0)) *
                               sq.value());
        TentAtom atom{Ball{}, HalfSpaceSample(tg, g, F.components()), 0.0};
        // ball: same center as the cube, radius l(I*)/2
        const double side = reg.cube.side(g);
        for (int dd = 0; dd < n; ++dd)
            atom.ball.center[static_cast<std::size_t>(dd)] =
                (static_cast<double>(reg.cube.index[static_cast<std::size_t>(dd)]) + 0.5) * side;
        atom.ball.radius = 0.5 * l_star;
        for (const auto& [it, ix] : reg.samples)
            for (int c = 0; c < F.components(); ++c) {
                atom.values.at(it, c, ix) = F.at(it, c, ix) / lam;
                recon.at(it, c, ix) += lam * atom.values.at(it, c, ix);
            }
        atom.norm_value = sq.value() / (lam * lam);
        out.lambdas.push_back(lam);
        l1.add(std::fabs(lam));
        out.certificates.push_back(validate_atom(atom, p));
        out.atoms.push_back(std::move(atom));
    }
    out.lambda_l1 = l1.value();

    double resid = 0.0;
    for (std::size_t it = 0; it < tg.size(); ++it)
        for (int c = 0; c < F.components(); ++c)
            for (std::size_t ix = 0; ix < g.total(); ++ix)
                resid = std::max(resid, std::fabs(recon.at(it, c, ix) - F.at(it, c, ix)));
    out.reconstruction_residual = resid / f_max;
    return out;
}

HalfSpaceSample atom_proof_weight(const TimeGrid& tg, const TorusGrid& g, const Ball& b,
                                  const FracParams& p, double eps) {
    const int n = g.dim();
    const double expo = static_cast<double>(n) - 2.0 * (p.alpha + p.beta - 1.0) + eps;
    HalfSpaceSample w(tg, g, 1, true);
    for (std::size_t it = 0; it < tg.size(); ++it) {
        double t = tg.node(it);
        for (std::size_t ix = 0; ix < g.total(); ++ix) {
            double dist = std::sqrt(sqr(dist_to_center(g, ix, b.center)) + t * t);
            double val = std::pow(b.radius, -static_cast<double>(n) + 2.0 * (p.alpha + p.beta - 1.0)) *
                         std::min(1.0, std::pow(b.radius / dist, expo));
            w.at(it, 0, ix) = val;
        }
    }
    return w;
}

HalfSpaceSample nt_power_weight(const HalfSpaceSample& F, double power) {
    auto nf = nontangential_max(F);
    HalfSpaceSample w(F.tgrid(), F.sgrid(), 1, true);
    for (std::size_t it = 0; it < F.tgrid().size(); ++it)
        for (std::size_t ix = 0; ix < F.sgrid().total(); ++ix)
            w.at(it, 0, ix) = std::pow(nf[ix], power);
    return w;
}

double tent_pairing(const HalfSpaceSample& F, const HalfSpaceSample& G) {
    require(F.sgrid() == G.sgrid() && F.tgrid().size() == G.tgrid().size() &&
                F.components() == G.components(),
            "tent_pairing: shape mismatch");
    const TorusGrid& g = F.sgrid();
    const TimeGrid& tg = F.tgrid();
    const double hn = std::pow(g.spacing(), g.dim());
    KahanSum acc;
    for (std::size_t it = 0; it < tg.size(); ++it) {
        double w = tg.weight(it, 1.0, tg.horizon());
        KahanSum spatial;
        for (int c = 0; c < F.components(); ++c)
            for (std::size_t ix = 0; ix < g.total(); ++ix)
                spatial.add(F.at(it, c, ix) * G.at(it, c, ix));
        acc.add(w * spatial.value() * hn);
    }
    return acc.value();
}

T1Bracket t1_norm_bracket(const HalfSpaceSample& F, const FracParams& p,
                          const std::vector<HalfSpaceSample>& omega_candidates,
                          const std::vector<HalfSpaceSample>& g_tests, const BallFamily& balls) {
    require(!omega_candidates.empty() && !g_tests.empty(),
            "t1_norm_bracket: candidate and test sets must be nonempty");
    const TorusGrid& g = F.sgrid();
    const TimeGrid& tg = F.tgrid();
    const int n = g.dim();
    const double d = p.capacity_dim(n);
    const double gamma = 1.0 - 2.0 * (p.alpha - p.beta + 1.0);
    const double hn = std::pow(g.spacing(), n);

    T1Bracket out;
    if (F.max_abs() == 0.0) return out;

    double best_upper = std::numeric_limits<double>::infinity();
    for (std::size_t ci = 0; ci < omega_candidates.size(); ++ci) {
        const auto& cand = omega_candidates[ci];
        double budget = choquet_integral(g, nontangential_max(cand), d);
        if (budget <= 0.0) continue;
        // rescale so the capacity budget is exactly one
        KahanSum acc;
        bool ok = true;
        for (std::size_t it = 0; it < tg.size() && ok; ++it) {
            double w = tg.weight(it, gamma, tg.horizon());
            for (std::size_t ix = 0; ix < g.total(); ++ix) {
                double m2 = F.mag2(it, ix);
                if (m2 == 0.0) continue;
                double om = cand.at(it, 0, ix) / budget;
                om = std::max(om, 1e-300);  // floor on the support, by convention
                acc.add(w * m2 / om * hn);
            }
        }
        if (!ok) continue;
        double val = std::sqrt(acc.value());
        if (val < best_upper) {
            best_upper = val;
            out.best_candidate = ci;
        }
    }
    out.upper = best_upper;

    double best_lower = 0.0;
    for (std::size_t gi = 0; gi < g_tests.size(); ++gi) {
        double tnorm = t_infty_norm(g_tests[gi], p, balls).value;
        if (tnorm <= 0.0) continue;
        double val = std::fabs(tent_pairing(F, g_tests[gi])) / tnorm;
        if (val > best_lower) {
            best_lower = val;
            out.best_test = gi;
        }
    }
    out.lower = best_lower;
    return out;
}

}  // namespace qnslab
