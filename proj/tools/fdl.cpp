// Command-line frontend: deterministic, seeded runs with CSV/JSON output.
//
// Exit codes: 0 success, 1 validation failure, 2 numeric-guard failure,
// 64 usage errors.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "fdl/bounds.hpp"
#include "fdl/bourgain_guth.hpp"
#include "fdl/caps.hpp"
#include "fdl/evolution.hpp"
#include "fdl/io.hpp"
#include "fdl/knapp.hpp"
#include "fdl/lattice_count.hpp"
#include "fdl/measure.hpp"
#include "fdl/spectral.hpp"

namespace fs = std::filesystem;
using fdl::json;

namespace {

struct GlobalOpts {
    std::string out = "out";
    std::uint64_t seed = 0;
    std::string config_path;
};

fs::path ensure_outdir(const std::string& out) {
    fs::path p(out);
    fs::create_directories(p);
    return p;
}

void echo_config(const fs::path& dir, const std::string& subcommand, const json& resolved) {
    json j;
    j["subcommand"] = subcommand;
    j["flags"] = resolved;
    fdl::write_json(dir / "config.json", j);
}

// --config JSON supplies defaults for long flags that were not given on
// the command line.
std::vector<std::string> merge_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string cfg;
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--config") cfg = args[i + 1];
    if (cfg.empty()) return args;
    std::ifstream f(cfg);
    if (!f) throw std::invalid_argument("cannot open config file " + cfg);
    json j;
    f >> j;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string flag = "--" + it.key();
        bool present = false;
        for (const auto& a : args)
            if (a == flag) present = true;
        if (present) continue;
        args.push_back(flag);
        if (it.value().is_string()) args.push_back(it.value().get<std::string>());
        else args.push_back(it.value().dump());
    }
    return args;
}

// ---- bounds ---------------------------------------------------------------

int run_bounds(const GlobalOpts& g, int d, double a_lo, double a_hi, int grid) {
    const fs::path dir = ensure_outdir(g.out);
    fdl::CsvWriter csv({"d", "alpha", "beta_lower", "lower_provenance", "beta_upper",
                        "upper_provenance"});
    for (int i = 0; i < grid; ++i) {
        const double a = a_lo + (a_hi - a_lo) * i / (grid - 1.0);
        const auto lo = fdl::beta_lower(d, a);
        const auto hi = fdl::beta_upper(d, a);
        csv.add_row({std::to_string(d), fdl::fmt_g17(a), fdl::fmt_g17(lo.value), lo.provenance,
                     fdl::fmt_g17(hi.value), hi.provenance});
    }
    csv.write(dir / "bounds.csv");

    json th;
    th["d"] = d;
    if (d >= 3) {
        const auto full = fdl::distance_set_threshold(d, fdl::FloorKind::full);
        const auto erd = fdl::distance_set_threshold(d, fdl::FloorKind::erdogan_only);
        th["distance_threshold_full"] = full ? json(*full) : json(nullptr);
        th["distance_threshold_erdogan_only"] = erd ? json(*erd) : json(nullptr);
        th["distance_threshold_reference"] = 0.5 * d + 5.0 / 12.0;
        th["gamma_at_s1_full_floor"] = fdl::gamma_upper_wave(d, 1.0, fdl::FloorKind::full);
    }
    th["gamma_sjolin_s_0p75"] = fdl::gamma_upper_wave(d, 0.75, fdl::FloorKind::sjolin_only);
    fdl::write_json(dir / "thresholds.json", th);

    json echo;
    echo["d"] = d;
    echo["alpha_min"] = a_lo;
    echo["alpha_max"] = a_hi;
    echo["grid"] = grid;
    echo["seed"] = g.seed;
    echo_config(dir, "bounds", echo);
    std::printf("bounds: wrote %s and thresholds.json (%d rows)\n",
                (dir / "bounds.csv").c_str(), grid);
    return 0;
}

// ---- decay-scan ------------------------------------------------------------

int run_decay_scan(const GlobalOpts& g, const std::string& measure, const std::string& file,
                   int d, int points, double ratio, int depth, double r_min, double r_max,
                   int nodes) {
    const fs::path dir = ensure_outdir(g.out);
    fdl::DiscreteMeasure mu;
    if (!file.empty()) {
        std::ifstream f(file);
        if (!f) throw std::invalid_argument("cannot open measure file " + file);
        json j;
        f >> j;
        mu = fdl::measure_from_json(j);
    } else if (measure == "sphere") {
        mu = fdl::make_sphere_measure(d, points);
    } else if (measure == "cantor") {
        mu = fdl::make_cantor_measure(d, ratio, depth);
    } else {
        throw std::invalid_argument("decay-scan: measure must be sphere|cantor or --measure-file");
    }
    const auto quad = fdl::build_sphere_quadrature(mu.d, nodes, g.seed);
    const fdl::Vec grid = fdl::jittered_dyadic_grid(r_min, r_max, g.seed, measure == "sphere");
    const fdl::DecayCurve curve = fdl::decay_scan(mu, grid, quad);
    fdl::write_text(dir / "curve.csv", curve.to_csv());
    const fdl::ExponentFit fit = fdl::fit_decay_exponent(curve, 0, curve.R.size());
    fdl::write_json(dir / "fit.json", fit.to_json());

    json echo;
    echo["measure"] = measure;
    echo["measure_file"] = file;
    echo["d"] = d;
    echo["points"] = points;
    echo["ratio"] = ratio;
    echo["depth"] = depth;
    echo["R_min"] = r_min;
    echo["R_max"] = r_max;
    echo["nodes"] = nodes;
    echo["seed"] = g.seed;
    echo_config(dir, "decay-scan", echo);
    std::printf("decay-scan: beta = %.6f (stderr %.2e), curve.csv has %zu rows\n", fit.beta,
                fit.stderr_, curve.R.size());
    return 0;
}

// ---- knapp -----------------------------------------------------------------

int run_knapp(const GlobalOpts& g, int d, const std::vector<std::int64_t>& ns, double kappa,
              double rho, double eps, int samples) {
    const fs::path dir = ensure_outdir(g.out);
    fdl::KnappSampling sampling;
    sampling.phase_pairs = samples;
    sampling.seed = g.seed + 1;
    std::vector<fdl::KnappReport> reports;
    json jr = json::array();
    for (std::int64_t n : ns) {
        fdl::KnappConfig cfg;
        cfg.d = d;
        cfg.n = n;
        cfg.kappa = kappa;
        cfg.rho = rho;
        cfg.epsilon = eps;
        reports.push_back(fdl::knapp_pipeline(cfg, sampling));
        jr.push_back(reports.back().to_json());
        fdl::write_text(dir / ("residuals_n" + std::to_string(n) + ".csv"),
                        fdl::knapp_residuals_csv(reports.back()));
    }
    json out;
    out["reports"] = jr;
    if (reports.size() >= 2) out["implied_beta_fit"] = fdl::implied_beta_from_reports(reports);
    fdl::write_json(dir / "knapp.json", out);

    json echo;
    echo["d"] = d;
    json jn = json::array();
    for (auto n : ns) jn.push_back(n);
    echo["n"] = jn;
    echo["kappa"] = kappa;
    echo["rho"] = rho;
    echo["eps"] = eps;
    echo["samples"] = samples;
    echo["seed"] = g.seed;
    echo_config(dir, "knapp", echo);
    for (const auto& r : reports)
        std::printf("knapp n=%lld: #Gamma=%zu containment=%.4f ext_ratio=%.4f "
                    "formula_beta=%.4f\n",
                    static_cast<long long>(r.n), r.gamma_count, r.phase_containment_fraction,
                    r.min_extension_ratio, r.formula_beta);
    if (reports.size() >= 2)
        std::printf("knapp: implied beta (cross-scale fit) = %.4f\n",
                    fdl::implied_beta_from_reports(reports));
    return 0;
}

// ---- caps ------------------------------------------------------------------

int run_caps(const GlobalOpts& g, const std::string& phase_name, int d, double delta, double R,
             double eps, const std::vector<double>& demo_K, int probe_points) {
    const fs::path dir = ensure_outdir(g.out);
    const fdl::PhaseKind kind =
        phase_name == "sphere" ? fdl::PhaseKind::sphere : fdl::PhaseKind::paraboloid;
    const fdl::Phase phase(kind, d - 1);

    // transversality demo: two caps split from a parent at +-delta/4
    {
        fdl::Vec c1(d - 1, 0.0), c2(d - 1, 0.0);
        c1[0] = -0.25 * delta;
        c2[0] = 0.25 * delta;
        const fdl::Cap cap1(phase, c1, 0.4 * delta), cap2(phase, c2, 0.4 * delta);
        std::printf("caps: 2-transversality of the split pair = %.6f\n",
                    fdl::transversality_constant({cap1, cap2}));
    }

    const fdl::ScaleLadder ladder = fdl::build_scale_ladder(R, eps, d);
    fdl::CsvWriter csv({"m", "K_m", "chain_ok"});
    for (int m = 2; m <= d + 1; ++m)
        csv.add_row({std::to_string(m), fdl::fmt_g17(ladder.K_at(m)),
                     m <= d ? (ladder.chain_ok[m - 2] ? "1" : "0") : ""});
    csv.write(dir / "ladder.csv");

    // probe with demo scales
    json pj;
    if (static_cast<int>(demo_K.size()) == d && (d == 2 || d == 3)) {
        const fdl::ScaleLadder demo = fdl::scale_ladder_from_scales(R, eps, d, demo_K);
        const fdl::Cap cap(phase, fdl::Vec(d - 1, 0.0), 0.5);
        fdl::Rng rng(g.seed ^ 0xca95ULL);
        auto gfun = [&](const fdl::Vec&) { return fdl::cplx{1.0, 0.0}; };
        std::vector<fdl::Vec> pts;
        for (int i = 0; i < probe_points; ++i) {
            fdl::Vec p(d);
            for (int k = 0; k < d; ++k) p[k] = rng.uniform(-2.0, 2.0);
            pts.push_back(p);
        }
        const fdl::ProbeStats stats = fdl::bg_inequality_probe(cap, gfun, demo, pts);
        pj["max_ratio"] = stats.max_ratio;
        pj["ratios"] = stats.ratios;
        const fdl::ConstancyReport ec =
            fdl::essential_constancy_probe(cap, gfun, fdl::Vec(d, 0.5));
        pj["essential_constancy_oscillation"] = ec.oscillation();
        pj["essential_constancy_within_factor_4"] = ec.oscillation() <= 4.0;
        fdl::write_json(dir / "probe.json", pj);
        std::printf("caps: probe max LHS/RHS ratio = %.4f over %d points\n", stats.max_ratio,
                    probe_points);
    }

    json echo;
    echo["phase"] = phase_name;
    echo["d"] = d;
    echo["delta"] = delta;
    echo["R"] = R;
    echo["eps"] = eps;
    echo["K"] = demo_K;
    echo["probe_points"] = probe_points;
    echo["seed"] = g.seed;
    echo_config(dir, "caps", echo);
    std::printf("caps: ladder.csv written (K_2..K_%d)\n", d + 1);
    return 0;
}

// ---- evolve ----------------------------------------------------------------

int run_evolve(const GlobalOpts& g, int n, double alpha, const std::string& measure_file,
               const std::vector<double>& R_list, int seeds) {
    const fs::path dir = ensure_outdir(g.out);
    fdl::DiscreteMeasure mu;
    if (!measure_file.empty()) {
        std::ifstream f(measure_file);
        if (!f) throw std::invalid_argument("cannot open measure file " + measure_file);
        json j;
        f >> j;
        mu = fdl::measure_from_json(j);
    } else {
        // uniform grid on [0,1] x {0}^{n-1}
        const int M = 64;
        mu.d = n;
        mu.label = "uniform segment grid";
        for (int i = 0; i < M; ++i) {
            fdl::Vec p(n, 0.0);
            p[0] = (i + 0.5) / M;
            mu.points.push_back(p);
            mu.weights.push_back(1.0 / M);
        }
        mu.validate();
    }
    fdl::Vec Rs(R_list);
    const fdl::MaximalScanResult res = fdl::maximal_scaling_fit(n, mu, alpha, Rs, seeds);
    fdl::write_json(dir / "maximal_scan.json", res.to_json());
    fdl::write_text(dir / "norms.csv", res.norms_csv());

    json echo;
    echo["n"] = n;
    echo["alpha"] = alpha;
    echo["measure"] = measure_file;
    echo["R"] = R_list;
    echo["seeds"] = seeds;
    echo["seed"] = g.seed;
    echo_config(dir, "evolve", echo);
    std::printf("evolve: fitted slope %.4f (s0 = %.4f, %s)\n", res.slope, res.s0,
                res.s0_branch.c_str());
    return 0;
}

// ---- selftest ----------------------------------------------------------------

int g_failures = 0;
void check(bool ok, const char* what) {
    std::printf("%s %s\n", ok ? "[ok]" : "[FAIL]", what);
    if (!ok) ++g_failures;
}

int run_selftest() {
    using namespace fdl;
    // measures
    {
        const auto mu = make_cantor_measure(1, 0.25, 1);
        check(mu.size() == 2 && std::abs(mu.weights[0] - 0.5) < 1e-15, "cantor depth 1: 2 points of weight 1/2");
        const auto mu3 = make_cantor_measure(1, 0.25, 3);
        check(mu3.size() == 8, "cantor depth 3: 8 cells");
        const auto sph = make_sphere_measure(2, 4);
        check(std::abs(sph.points[1][0]) < 1e-15 && std::abs(sph.points[1][1] - 1.0) < 1e-15,
              "sphere d=2 n=4 equal angles");
        check(std::abs(sph.total_mass() - 1.0) < 1e-12, "sphere measure unit mass");
        for (int d : {2, 3})
            check(make_lattice_measure(d, 8.0, 0.999, 0.25, 1).size() ==
                      static_cast<std::size_t>(2 * d + 1),
                  "near-unit spacing lattice has 2d+1 centres");
        DiscreteMeasure unit;
        unit.d = 2;
        unit.points = {{0.0, 0.0}};
        unit.weights = {1.0};
        unit.label = "dirac";
        const auto rep = c_alpha_estimate(unit, 1.0, {1.0});
        check(std::abs(rep.value - 1.0) < 1e-15, "c_alpha of unit mass at radius 1");
        const auto sc = scale_measure(unit, 1.0, 1.0);
        check(sc.size() == 1 && std::abs(sc.weights[0] - 1.0) < 1e-15, "scale by R=1 is identity");
        DiscreteMeasure half;
        half.d = 2;
        half.points = {{0.5, 0.0}};
        half.weights = {1.0};
        half.label = "half";
        const auto mv = scale_measure(half, 2.0, 1.0);
        check(std::abs(mv.points[0][0] - 1.0) < 1e-15 && std::abs(mv.weights[0] - 2.0) < 1e-15,
              "unit mass at e1/2 scales to mass 2 at e1");
    }
    // spectral
    {
        DiscreteMeasure unit;
        unit.d = 2;
        unit.points = {{0.0, 0.0}};
        unit.weights = {1.0};
        unit.label = "dirac";
        check(std::abs(fourier_transform_measure(unit, {3.0, -4.0}) - cplx{1.0, 0.0}) < 1e-15,
              "unit mass has flat transform");
        DiscreteMeasure pair;
        pair.d = 2;
        pair.points = {{0.2, 0.1}, {-0.2, -0.1}};
        pair.weights = {0.5, 0.5};
        pair.label = "pair";
        check(std::abs(fourier_transform_measure(pair, {1.0, 2.0}) -
                       cplx{std::cos(0.4), 0.0}) < 1e-14,
              "symmetric pair transforms to a cosine");
        const auto quad = build_sphere_quadrature(2, 8);
        check(std::abs(quad.weight_sum() - 2.0 * pi) < 1e-12, "d=2 quadrature weight sum 2 pi");
        const auto quad4 = build_sphere_quadrature(4, 5000, 7);
        check(std::abs(quad4.weight_sum() - 2.0 * pi * pi) < 1e-9, "d=4 weight sum 2 pi^2");
        check(std::abs(spherical_average(unit, 5.0, quad) - 2.0 * pi) < 1e-12,
              "single point: sigma = |S^1|");
        check(std::abs(spherical_average(pair, 0.0, quad) - 2.0 * pi) < 1e-12,
              "sigma at R=0 is mass^2 |S^1|");
        const auto curve = decay_scan(pair, {1.0, 2.0, 3.0}, quad);
        check(curve.R.size() == 3, "curve length equals grid length");
        DecayCurve syn;
        for (double R = 2.0; R <= 64.0; R *= 2.0) {
            syn.R.push_back(R);
            syn.sigma.push_back(std::pow(R, -2.0));
        }
        const auto fit = fit_decay_exponent(syn, 0, syn.R.size());
        check(std::abs(fit.beta - 2.0) < 1e-10 && fit.stderr_ < 1e-12, "exact power law fit");
        DecayCurve con;
        for (double R = 2.0; R <= 64.0; R *= 2.0) {
            con.R.push_back(R);
            con.sigma.push_back(5.0);
        }
        check(std::abs(fit_decay_exponent(con, 0, con.R.size()).beta) < 1e-12, "constant curve: beta 0");
    }
    // bounds
    {
        check(std::abs(beta_lower(2, 1.0).value - 0.5) < 1e-15, "beta_2(1) = 1/2");
        check(beta_lower(2, 1.0).provenance == "wolff table", "beta_2(1) provenance");
        check(std::abs(beta_upper(3, 1.0).value - 1.0) < 1e-15, "upper d=3 alpha=1");
        const auto q = alpha_upper_schrodinger(2, 0.45);
        check(std::abs(q.value - 1.8) < 1e-12, "schrodinger branch 1 at n=2, s=0.45");
        check(std::abs(alpha_upper_schrodinger(2, 0.75).value - 0.5) < 1e-12,
              "schrodinger n=2, s=0.75 classical piece");
        check(std::abs(conjectural_beta_mlinear(6, 6.0, 6, MlinearVariant::conjectured) - 5.0) <
                  1e-12,
              "mlinear m=d at alpha=d gives d-1");
    }
    // knapp
    {
        check(sum_of_squares_points(4, 1).count() == 8, "r_4(1) = 8");
        check(sum_of_squares_points(4, 4).count() == 24, "r_4(4) = 24");
        check(sum_of_squares_points(3, 7).count() == 0, "r_3(7) = 0");
        std::vector<std::int64_t> ell{1, 0, 0, 0}, m{2, 1, 0, 0};
        const double R = std::pow(2.0 * pi, 2.0);
        const auto ps = phase_decomposition(ell, Vec(4, 0.0), m, Vec(4, 0.0), R, 0.5, 0.01, 0.01);
        check(ps.ell_dot_m == 2 && ps.I2 == 0.0 && ps.I3 == 0.0 && ps.I4 == 0.0,
              "pure lattice phase sits in 2 pi Z");
    }
    // caps
    {
        const Phase par(PhaseKind::paraboloid, 2);
        const Vec n0 = normal_at(par, {0.0, 0.0});
        check(std::abs(n0[0]) < 1e-15 && std::abs(n0[2] - 1.0) < 1e-15, "flat normal at origin");
        const Cap cap(par, {0.0, 0.0}, 0.5);
        check(transversality_constant({cap, cap}) < 1e-7, "identical caps have zero wedge");
        const auto kids = cap_partition(cap, 2.0);
        check(kids.size() == 4, "K=2 partition in d=3 gives 4 children");
        const std::vector<Vec> full{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        check(v_set_select(cap, kids, full, 2.0).size() == kids.size(),
              "full-space selection keeps every child");
        GridFunction ones = sample_on_cap(cap, 4, [](const Vec&) { return cplx{1.0, 0.0}; });
        check(std::abs(extension_operator(cap, ones, {0.0, 0.0}, 0.0) - cplx{0.25, 0.0}) < 1e-12,
              "extension of 1 at origin equals |Q|");
        const Phase sph(PhaseKind::sphere, 1);
        const Phase id = sph.rescaled({0.0}, 1.0);
        check(std::abs(id.value({0.3}) - sph.value({0.3})) < 1e-14,
              "unit-scale rescaling is the identity");
        const auto lad = build_scale_ladder(std::pow(2.0, 40.0), 0.05, 3);
        check(lad.K_at(2) < lad.K_at(3) && lad.K_at(3) < lad.K_at(4), "ladder increases");
        check(lad.K_at(4) < std::pow(lad.R, lad.eps), "K_{d+1} < R^eps");
    }
    // evolution
    {
        FrequencyDatum zero;
        zero.n = 1;
        zero.h = 0.5;
        zero.nodes = {{1.0}};
        zero.values = {cplx{0.0, 0.0}};
        check(std::abs(truncated_propagator(zero, 2.0, 0.3, {0.1}, 10.0)) < 1e-18,
              "zero datum propagates to zero");
        const FrequencyDatum f = gaussian_datum(1, 1.0, 0.125, 8.0);
        const cplx got = truncated_propagator(f, 2.0, 0.0, {0.5}, 2500.0);
        check(std::abs(got - std::exp(cplx{-0.125, 0.0})) < 1e-6, "gaussian recovered at t=0");
        const auto fb = bessel_riesz_multiplier(bessel_riesz_multiplier(f, 0.7, false), -0.7, false);
        double err = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i)
            err = std::max(err, std::abs(fb.values[i] - f.values[i]));
        check(err < 1e-14, "bessel s then -s is the identity");
        FrequencyDatum node;
        node.n = 2;
        node.h = 1.0;
        node.nodes = {{1.0, std::sqrt(2.0)}};
        node.values = {cplx{1.0, 0.0}};
        check(std::abs(bessel_riesz_multiplier(node, 1.0, false).values[0] - cplx{0.5, 0.0}) <
                  1e-14,
              "bessel factor at a root-3 node");
        const auto ident = bessel_riesz_multiplier(node, 0.0, false);
        check(ident.values[0] == node.values[0], "s = 0 multiplier is the identity");
        // one-mode cosine evolution
        FrequencyDatum v1(node);
        v1.n = 2;
        v1.values = {cplx{0.0, 0.0}};
        const cplx w0 = wave_solution(node, v1, 0.0, {0.1, 0.2}, 100.0);
        const cplx wt = wave_solution(node, v1, 0.4, {0.1, 0.2}, 100.0);
        check(std::abs(wt - w0 * std::cos(0.4 * std::sqrt(3.0))) < 1e-12,
              "single mode follows the cosine clock");
        const double m1 = maximal_function(f, 2.0, {0.2}, {0.1}, {50.0});
        const double m2 = maximal_function(f, 2.0, {0.2}, {0.1, 0.2}, {50.0});
        check(m2 >= m1, "maximal function grows with the t grid");
    }
    std::printf(g_failures == 0 ? "selftest: all checks passed\n"
                                : "selftest: %d checks FAILED\n",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fdl: spherical Fourier decay of fractal measures, numerically"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    GlobalOpts g;
    app.add_option("--out", g.out, "output directory");
    app.add_option("--seed", g.seed, "master seed");
    app.add_option("--config", g.config_path, "JSON file with default flag values");

    // bounds
    int b_d = 3, b_grid = 201;
    double b_lo = 0.05, b_hi = -1.0;
    auto* sub_bounds = app.add_subcommand("bounds", "exponent tables and thresholds");
    sub_bounds->add_option("--d", b_d, "ambient dimension");
    sub_bounds->add_option("--alpha-min", b_lo, "grid start");
    sub_bounds->add_option("--alpha-max", b_hi, "grid end (default d)");
    sub_bounds->add_option("--grid", b_grid, "grid size");

    // decay-scan
    std::string ds_measure = "sphere", ds_file;
    int ds_d = 3, ds_points = 20000, ds_depth = 3, ds_nodes = 2000;
    double ds_ratio = 0.25, ds_rmin = 4.0, ds_rmax = 64.0;
    auto* sub_decay = app.add_subcommand("decay-scan", "spherical average decay curve and fit");
    sub_decay->add_option("--measure", ds_measure, "sphere|cantor");
    sub_decay->add_option("--measure-file", ds_file, "measure JSON file");
    sub_decay->add_option("--d", ds_d, "dimension");
    sub_decay->add_option("--points", ds_points, "measure points");
    sub_decay->add_option("--ratio", ds_ratio, "cantor contraction ratio");
    sub_decay->add_option("--depth", ds_depth, "cantor depth");
    sub_decay->add_option("--R-min", ds_rmin, "first dyadic shell");
    sub_decay->add_option("--R-max", ds_rmax, "last dyadic shell");
    sub_decay->add_option("--nodes", ds_nodes, "sphere quadrature nodes");

    // knapp
    int k_d = 4, k_samples = 10000;
    std::vector<std::int64_t> k_ns{1};
    double k_kappa = 0.5, k_rho = 0.01, k_eps = 0.01;
    auto* sub_knapp = app.add_subcommand("knapp", "integer-sphere counterexample pipeline");
    sub_knapp->add_option("--d", k_d, "dimension (>= 4)");
    sub_knapp->add_option("--n", k_ns, "lattice radii (R = (2 pi n)^{1/kappa})");
    sub_knapp->add_option("--kappa", k_kappa, "kappa in (0,1)");
    sub_knapp->add_option("--rho", k_rho, "cap radius factor");
    sub_knapp->add_option("--eps", k_eps, "lattice ball factor");
    sub_knapp->add_option("--samples", k_samples, "sampled phase pairs");

    // caps
    std::string c_phase = "paraboloid";
    int c_d = 3, c_probe_points = 8;
    double c_delta = 0.5, c_R = 1e6, c_eps = 0.05;
    std::vector<double> c_K;
    auto* sub_caps = app.add_subcommand("caps", "cap geometry, ladders and probes");
    sub_caps->add_option("--phase", c_phase, "paraboloid|sphere");
    sub_caps->add_option("--d", c_d, "ambient dimension");
    sub_caps->add_option("--delta", c_delta, "cap side");
    sub_caps->add_option("--R", c_R, "ladder R");
    sub_caps->add_option("--eps", c_eps, "ladder eps (< 1/(4d))");
    sub_caps->add_option("--K", c_K, "demo scales K_2..K_{d+1} for the probe");
    sub_caps->add_option("--probe-points", c_probe_points, "probe sample points");

    // evolve
    int e_n = 1, e_seeds = 4;
    double e_alpha = 1.0;
    std::string e_measure;
    std::vector<double> e_R{16, 32, 64, 128};
    auto* sub_evolve = app.add_subcommand("evolve", "maximal-function scaling experiment");
    sub_evolve->add_option("--n", e_n, "spatial dimension");
    sub_evolve->add_option("--alpha", e_alpha, "measure dimensionality");
    sub_evolve->add_option("--measure", e_measure, "measure JSON file (default segment grid)");
    sub_evolve->add_option("--R", e_R, "annulus scales");
    sub_evolve->add_option("--seeds", e_seeds, "random data draws per scale");

    auto* sub_selftest = app.add_subcommand("selftest", "run the built-in assertion suite");

    try {
        const auto args = merge_config_args(argc, argv);
        std::vector<const char*> cargs{argv[0]};
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());

        if (sub_bounds->parsed()) {
            if (b_hi <= 0.0) b_hi = b_d;
            return run_bounds(g, b_d, b_lo, b_hi, b_grid);
        }
        if (sub_decay->parsed())
            return run_decay_scan(g, ds_measure, ds_file, ds_d, ds_points, ds_ratio, ds_depth,
                                  ds_rmin, ds_rmax, ds_nodes);
        if (sub_knapp->parsed())
            return run_knapp(g, k_d, k_ns, k_kappa, k_rho, k_eps, k_samples);
        if (sub_caps->parsed())
            return run_caps(g, c_phase, c_d, c_delta, c_R, c_eps, c_K, c_probe_points);
        if (sub_evolve->parsed())
            return run_evolve(g, e_n, e_alpha, e_measure, e_R, e_seeds);
        if (sub_selftest->parsed()) return run_selftest();
        return 64;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << app.help() << "\nerror: " << e.what() << "\n";
        return 64;
    } catch (const fdl::NumericGuardError& e) {
        std::cerr << "numeric guard: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
