// Command-line front door: experiment configuration, test-field generation,
// batch verification suites, solver runs and report/plot emission.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qnslab/config.hpp"
#include "qnslab/kernels.hpp"
#include "qnslab/solver.hpp"
#include "qnslab/spectral_ops.hpp"
#include "qnslab/suites.hpp"
#include "qnslab/svg.hpp"
#include "qnslab/tentspace.hpp"
#include "qnslab/test_family.hpp"

namespace fs = std::filesystem;
using namespace qnslab;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    require(static_cast<bool>(out), "cannot open " + path.string());
    out << text;
}

// reports stay byte-identical for identical config + seed; wall-clock data
// lives in a separate metadata block
void write_meta(const fs::path& dir) {
    auto now = std::chrono::system_clock::now().time_since_epoch();
    nlohmann::ordered_json meta;
    meta["timestamp_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    write_text(dir / "meta.json", meta.dump(2) + "\n");
}

TestFamily family_of(const ExperimentConfig& cfg) {
    TestFamily fam;
    fam.seed = cfg.seed;
    fam.count = cfg.count;
    fam.spectrum_slope = cfg.spectrum_slope;
    fam.divergence_free = cfg.divergence_free;
    return fam;
}

int cmd_gen(const ExperimentConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    TorusGrid g(cfg.n, cfg.N, cfg.L);
    TestFamily fam = family_of(cfg);
    int comps = cfg.divergence_free ? cfg.n : 1;
    nlohmann::ordered_json manifest;
    manifest["seed"] = cfg.seed;
    manifest["count"] = cfg.count;
    manifest["spectrum_slope"] = cfg.spectrum_slope;
    manifest["grid"] = {{"n", cfg.n}, {"N", cfg.N}, {"L", cfg.L}};
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (int i = 0; i < cfg.count; ++i) {
        auto f = fam.make(g, comps, i);
        char name[64];
        std::snprintf(name, sizeof(name), "field_%03d.qnsf", i);
        write_qnsf((fs::path(out_dir) / name).string(), f);
        files.push_back(name);
    }
    manifest["files"] = files;
    write_text(fs::path(out_dir) / "gen_manifest.json", manifest.dump(2) + "\n");
    write_meta(out_dir);
    std::cout << "wrote " << cfg.count << " fields to " << out_dir << "\n";
    return 0;
}

int cmd_norm(const ExperimentConfig& cfg, const std::string& field_path, const std::string& which,
             const std::string& out_dir, int threads) {
    fs::create_directories(out_dir);
    auto f = read_qnsf(field_path);
    const TorusGrid& g = f.grid();
    FracParams p(cfg.alpha, cfg.beta, cfg.beta >= 1.0);
    auto cubes = CubeFamily::central(g);
    auto balls = BallFamily::central(g);
    CarlesonOptions opt;
    opt.tgrid = TimeGrid::geometric(2.0 * cfg.T, 40, 1.4);
    opt.horizon = cfg.T;

    NormReport rep;
    if (which == "q") {
        rep = q_norm(f, p, cubes, threads);
    } else if (which == "q_translated") {
        rep = q_norm_translated(f, p, cubes, threads);
    } else if (which == "bmo") {
        rep = bmo_beta_norm(f, cfg.beta, cubes);
    } else if (which == "q_inverse") {
        rep = carleson_q_inverse_norm(f, p, balls, opt);
    } else if (which == "semigroup") {
        rep = semigroup_carleson_norm(f, p, balls, opt);
    } else if (which == "wavelet") {
        Window w = canonical_window(p.beta, 0);
        rep = wavelet_carleson_norm(f, w, p, balls, TimeGrid::geometric(g.period() / 4.0, 40, 1.35));
    } else {
        throw std::invalid_argument("norm: unknown --which '" + which +
                                    "' (q, q_translated, bmo, q_inverse, semigroup, wavelet)");
    }
    std::string text = rep.to_json().dump(2) + "\n";
    write_text(fs::path(out_dir) / ("norm_" + which + ".json"), text);
    write_meta(out_dir);
    std::cout << text;
    return 0;
}

int cmd_solve(const ExperimentConfig& cfg, const std::string& out_dir, double amplitude,
              bool locate_threshold, bool snapshots) {
    fs::create_directories(out_dir);
    TorusGrid g(cfg.n, cfg.N, cfg.L);
    require(cfg.n >= 2, "solve: the velocity solver needs n >= 2");
    FracParams p(cfg.alpha, cfg.beta, cfg.beta >= 1.0);
    TestFamily fam = family_of(cfg);
    fam.divergence_free = true;
    auto a = fam.make(g, cfg.n, 0);
    a *= amplitude / (a.linf_norm() + 1e-300);
    TimeGrid tg = TimeGrid::geometric(cfg.T, 32, 1.35);
    auto balls = BallFamily::central(g, 3, 2);

    auto st = picard_solve(a, tg, p, 12, 1e-12, balls);
    auto manifest = run_manifest(st, tg, p);
    if (locate_threshold) {
        SpectralField unit = a;
        unit *= 1.0 / (a.linf_norm() + 1e-300);
        manifest["smallness_threshold"] = find_smallness_threshold(unit, tg, p, balls, 8);
    }
    auto rs = residual(st.slices, tg, p, true);
    manifest["max_interior_residual"] = rs.max_interior_mild;
    write_text(fs::path(out_dir) / "run_manifest.json", manifest.dump(2) + "\n");
    if (snapshots) {
        for (std::size_t m = 0; m < tg.size(); ++m) {
            char name[64];
            std::snprintf(name, sizeof(name), "u_%03zu.qnsf", m);
            write_qnsf((fs::path(out_dir) / name).string(), st.slices[m]);
        }
    }
    write_meta(out_dir);
    std::cout << manifest.dump(2) << "\n";
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& out_dir,
               const std::vector<std::string>& formats, int threads) {
    fs::create_directories(out_dir);
    auto results = run_suites(suite, threads);
    std::string table = render_table(results);
    std::cout << table;
    bool all_pass = true;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        all_pass = all_pass && r.pass();
        arr.push_back(r.to_json());
    }
    for (const auto& fmt : formats) {
        if (fmt == "json") {
            write_text(fs::path(out_dir) / "verify.json", arr.dump(2) + "\n");
        } else if (fmt == "csv") {
            std::ostringstream csv;
            csv << "suite,check,pass,value,comparison,threshold\n";
            for (const auto& r : results)
                for (const auto& c : r.checks)
                    csv << r.suite << "," << c.name << "," << (c.pass ? 1 : 0) << "," << c.value
                        << "," << c.comparison << "," << c.threshold << "\n";
            write_text(fs::path(out_dir) / "verify.csv", csv.str());
        }
    }
    write_meta(out_dir);
    return all_pass ? 0 : 1;
}

int cmd_decompose(const ExperimentConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    TorusGrid g(cfg.n, cfg.N, cfg.L);
    FracParams p(cfg.alpha, cfg.beta, cfg.beta >= 1.0);
    require(p.tent_admissible(), "decompose: requires alpha + beta - 1 >= 0");
    TestFamily fam = family_of(cfg);
    auto base = fam.make(g, 1, 0);
    TimeGrid tg = TimeGrid::geometric(cfg.L / 4.0, 16, 1.5);
    auto F = heat_extension(base, tg, cfg.beta);
    auto omega = nt_power_weight(F, 1.0);
    for (auto& v : omega.raw()) v += 1e-9;
    auto dec = atomic_decompose(F, omega, p);

    nlohmann::ordered_json j;
    j["lambda_l1"] = dec.lambda_l1;
    j["reconstruction_residual"] = dec.reconstruction_residual;
    j["max_cover_cost_ratio"] = dec.max_cover_cost_ratio;
    nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < dec.atoms.size(); ++i) {
        nlohmann::ordered_json aj;
        aj["center"] = std::vector<double>(dec.atoms[i].ball.center.begin(),
                                           dec.atoms[i].ball.center.begin() + cfg.n);
        aj["radius"] = dec.atoms[i].ball.radius;
        aj["lambda"] = dec.lambdas[i];
        aj["V"] = dec.certificates[i].norm_value;
        aj["margin"] = dec.certificates[i].margin;
        atoms.push_back(aj);
    }
    j["atoms"] = atoms;
    write_text(fs::path(out_dir) / "decomposition.json", j.dump(2) + "\n");
    write_meta(out_dir);
    std::cout << "atoms: " << dec.atoms.size() << ", lambda_l1: " << dec.lambda_l1
              << ", residual: " << dec.reconstruction_residual << "\n";
    return 0;
}

int cmd_capacity(const ExperimentConfig& cfg, const std::string& setspec, double d_arg,
                 const std::string& out_dir) {
    fs::create_directories(out_dir);
    TorusGrid g(cfg.n, cfg.N, cfg.L);
    std::istringstream ss(setspec);
    std::string kind;
    ss >> kind;
    std::vector<double> nums;
    double v;
    while (ss >> v) nums.push_back(v);
    std::vector<bool> mask(g.total(), false);
    std::array<double, 3> c{{0, 0, 0}}, x{};
    if (kind == "ball" || kind == "cube") {
        require(nums.size() == static_cast<std::size_t>(cfg.n) + 1,
                "capacity: setspec needs n center fractions and one size fraction");
        for (int d = 0; d < cfg.n; ++d) c[static_cast<std::size_t>(d)] = nums[static_cast<std::size_t>(d)] * cfg.L;
        double size = nums.back() * cfg.L;
        for (std::size_t ix = 0; ix < g.total(); ++ix) {
            g.coords(ix, x);
            if (kind == "ball") {
                mask[ix] = g.torus_dist(x, c) < size;
            } else {
                bool in = true;
                for (int d = 0; d < cfg.n; ++d)
                    in = in && std::fabs(x[static_cast<std::size_t>(d)] - c[static_cast<std::size_t>(d)]) < 0.5 * size;
                mask[ix] = in;
            }
        }
    } else {
        throw std::invalid_argument("capacity: setspec must start with 'ball' or 'cube'");
    }
    double d = d_arg > 0.0 ? d_arg
                           : FracParams(cfg.alpha, cfg.beta, cfg.beta >= 1.0).capacity_dim(cfg.n);
    auto cap = hausdorff_capacity(g, mask, d);
    double exact = dyadic_capacity_exact(g, mask, d);
    std::ostringstream csv;
    csv << "set,d,upper,exact,lower,n_cubes\n";
    csv << '"' << setspec << '"' << ',' << d << ',' << cap.upper.cost << ',' << exact << ','
        << cap.lower << ',' << cap.upper.cubes.size() << "\n";
    write_text(fs::path(out_dir) / "capacity.csv", csv.str());
    write_meta(out_dir);
    std::cout << csv.str();
    return 0;
}

int cmd_report(const ExperimentConfig& cfg, const std::string& kind, const std::string& out_dir) {
    fs::create_directories(out_dir);
    if (kind == "kernel-profile") {
        std::vector<double> radii;
        for (int i = 0; i <= 80; ++i) radii.push_back(10.0 * i / 80.0);
        std::vector<SvgSeries> series;
        for (double beta : {0.6, 0.75, 0.9, 1.0}) {
            auto prof = heat_kernel_profile(cfg.n, beta, 1.0, radii);
            char name[64];
            std::snprintf(name, sizeof(name), "heat_profile_beta_%.2f.csv", beta);
            write_profile_csv((fs::path(out_dir) / name).string(), prof);
            SvgSeries s;
            s.label = std::string("beta=") + std::to_string(beta).substr(0, 4);
            s.x = radii;
            s.y = prof.values;
            series.push_back(std::move(s));
        }
        write_svg_plot((fs::path(out_dir) / "heat_profiles.svg").string(),
                       "dissipation kernel profiles, t = 1", series);
    } else if (kind == "decay-envelope") {
        std::vector<SvgSeries> series;
        for (double beta : {0.6, 0.75, 0.9}) {
            auto rep = decay_envelope_check(6, beta, 256, 40.0);
            SvgSeries s;
            s.label = std::string("beta=") + std::to_string(beta).substr(0, 4);
            for (int k = 1; k <= rep.k_max; ++k) {
                s.x.push_back(k);
                s.y.push_back(rep.M_root[static_cast<std::size_t>(k - 1)]);
            }
            series.push_back(std::move(s));
        }
        write_svg_plot((fs::path(out_dir) / "decay_envelope.svg").string(),
                       "weighted gradient-kernel envelope M_k^{1/k}", series);
    } else {
        throw std::invalid_argument("report: unknown kind '" + kind +
                                    "' (kernel-profile, decay-envelope)");
    }
    write_meta(out_dir);
    std::cout << "report written to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qnslab: numerical laboratory for critical-space estimates of "
                 "fractionally dissipative incompressible flow"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir, suite_name = "all", field_path, which = "q";
    std::string setspec = "ball 0.5 0.25", report_kind = "kernel-profile";
    std::uint64_t seed_override = 0;
    int threads_flag = 0;
    double amplitude = 1.0, d_arg = -1.0;
    bool locate_threshold = false, snapshots = false;
    std::vector<std::string> formats;

    app.add_option("--config", config_path, "experiment configuration file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed_override, "override family seed");
    app.add_option("--threads", threads_flag, "worker threads (QNSLAB_THREADS fallback)");
    app.add_option("--format", formats, "output formats: json, csv, svg");

    auto* gen = app.add_subcommand("gen", "generate the deterministic test family");
    auto* norm = app.add_subcommand("norm", "compute one norm report for a field file");
    norm->add_option("--field", field_path, "QNSF field file")->required();
    norm->add_option("--which", which, "q, q_translated, bmo, q_inverse, semigroup, wavelet");
    auto* solve = app.add_subcommand("solve", "run the mild-solution iteration");
    solve->add_option("--amplitude", amplitude, "initial data amplitude (sup norm)");
    solve->add_flag("--locate-threshold", locate_threshold, "bisect the smallness threshold");
    solve->add_flag("--snapshots", snapshots, "write QNSF snapshots per node");
    auto* verify = app.add_subcommand("verify", "run acceptance suites");
    verify->add_option("--suite", suite_name, "suite name or 'all'");
    auto* decompose = app.add_subcommand("decompose", "tent-space atomic decomposition dump");
    auto* capacity = app.add_subcommand("capacity", "dyadic capacity of a set");
    capacity->add_option("--set", setspec, "'ball cx [cy [cz]] r' or 'cube ...' as fractions of L");
    capacity->add_option("--d", d_arg, "capacity dimension (default n - 2(alpha+beta-1))");
    auto* report = app.add_subcommand("report", "emit CSV/SVG profile reports");
    report->add_option("--kind", report_kind, "kernel-profile or decay-envelope");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed_override != 0) cfg.seed = seed_override;
        if (out_dir.empty()) out_dir = cfg.out_dir;
        if (formats.empty()) formats = cfg.formats;
        int threads = resolve_threads(threads_flag);

        if (gen->parsed()) return cmd_gen(cfg, out_dir);
        if (norm->parsed()) return cmd_norm(cfg, field_path, which, out_dir, threads);
        if (solve->parsed()) return cmd_solve(cfg, out_dir, amplitude, locate_threshold, snapshots);
        if (verify->parsed()) {
            std::string suite = suite_name;
            if (suite == "all" && !config_path.empty()) suite = cfg.suite_name;
            return cmd_verify(suite, out_dir, formats, threads);
        }
        if (decompose->parsed()) return cmd_decompose(cfg, out_dir);
        if (capacity->parsed()) return cmd_capacity(cfg, setspec, d_arg, out_dir);
        if (report->parsed()) return cmd_report(cfg, report_kind, out_dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
