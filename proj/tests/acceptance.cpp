// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "fdl/bounds.hpp"
#include "fdl/bourgain_guth.hpp"
#include "fdl/caps.hpp"
#include "fdl/evolution.hpp"
#include "fdl/knapp.hpp"
#include "fdl/lattice_count.hpp"
#include "fdl/measure.hpp"
#include "fdl/spectral.hpp"

using namespace fdl;

namespace {

int g_failed = 0;

class Criterion {
  public:
    Criterion(int id, std::string name, double budget_seconds)
        : id_(id), name_(std::move(name)), budget_(budget_seconds),
          start_(std::chrono::steady_clock::now()) {}

    void expect(bool ok, const std::string& detail) {
        if (!ok) {
            ok_ = false;
            details_ += (details_.empty() ? "" : "; ") + detail;
        }
    }

    void finish() {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (budget_ > 0.0 && secs > budget_) {
            ok_ = false;
            details_ += (details_.empty() ? "" : "; ") + std::string("runtime ") +
                        std::to_string(secs) + "s over budget " + std::to_string(budget_) + "s";
        }
        std::printf("%s criterion %2d: %s (%.2fs)%s%s\n", ok_ ? "[PASS]" : "[FAIL]", id_,
                    name_.c_str(), secs, details_.empty() ? "" : " -- ", details_.c_str());
        if (!ok_) ++g_failed;
    }

  private:
    int id_;
    std::string name_;
    double budget_;
    bool ok_ = true;
    std::string details_;
    std::chrono::steady_clock::time_point start_;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void criterion_1_tables() {
    Criterion c(1, "two-dimensional table and breakpoint continuity", 1.0);
    const std::pair<double, double> rows[] = {{0.25, 0.25}, {0.5, 0.5},  {0.75, 0.5},
                                              {1.0, 0.5},   {1.5, 0.75}, {2.0, 1.0}};
    for (const auto& [a, want] : rows)
        c.expect(std::abs(beta_lower(2, a).value - want) <= 1e-12,
                 "beta_2(" + num(a) + ") != " + num(want));
    for (int d = 2; d <= 10; ++d) {
        c.expect(beta_lower_table(d).max_breakpoint_jump() < 1e-12,
                 "lower table jump at d=" + std::to_string(d));
        c.expect(beta_upper_table(d).max_breakpoint_jump() < 1e-12,
                 "upper table jump at d=" + std::to_string(d));
    }
    c.finish();
}

void criterion_2_dominance() {
    Criterion c(2, "dominance over the flat bounds and 5/6 gap", 5.0);
    for (int d = 3; d <= 10; ++d) {
        double worst_gap = 0.0;
        bool dom_sjolin = true, dom_erdogan = true, consistent = true;
        for (int i = 1; i <= 1000; ++i) {
            const double a = d * static_cast<double>(i) / 1000.0;
            const double ml = lower_multilinear_formula(d, a);
            if (a < d && !(ml > a - 1.0)) dom_sjolin = false;
            if (a >= 0.5 * d + 2.0 / 3.0 + 1.0 / d && a <= 0.5 * (d + 2.0) &&
                ml < lower_erdogan_formula(d, a) - 1e-12)
                dom_erdogan = false;
            const double lo = beta_lower(d, a).value, hi = beta_upper(d, a).value;
            if (lo > hi + 1e-12) consistent = false;
            worst_gap = std::max(worst_gap, hi - lo);
        }
        c.expect(dom_sjolin, "flat-bound dominance fails at d=" + std::to_string(d));
        c.expect(dom_erdogan, "erdogan dominance fails at d=" + std::to_string(d));
        c.expect(consistent, "lower exceeds upper at d=" + std::to_string(d));
        c.expect(worst_gap < 5.0 / 6.0,
                 "gap " + num(worst_gap) + " >= 5/6 at d=" + std::to_string(d));
    }
    c.finish();
}

void criterion_3_coincidence() {
    Criterion c(3, "d=4 upper bound coincides with the cap example", 0.0);
    for (int i = 0; i <= 4000; ++i) {
        const double a = 4.0 * i / 4000.0;
        if (a < 2.0) continue;  // cap piece applies on [d-2, d]
        if (std::abs(upper_sum_of_squares_formula(4, a) - upper_knapp_formula(4, a)) > 1e-12) {
            c.expect(false, "mismatch at alpha=" + num(a));
            break;
        }
    }
    // the new bound is defined on all of (0, d]; at d = 4 it also
    // coincides below alpha = 2 wherever both formulas are evaluated
    for (int i = 1; i <= 1000; ++i) {
        const double a = 2.0 * i / 1000.0;
        if (std::abs(upper_sum_of_squares_formula(4, a) - upper_knapp_formula(4, a)) > 1e-12) {
            c.expect(false, "formula mismatch at alpha=" + num(a));
            break;
        }
    }
    c.finish();
}

void criterion_4_thresholds() {
    Criterion c(4, "distance-set and wave thresholds", 0.0);
    for (int d = 3; d <= 20; ++d) {
        const auto erd = distance_set_threshold(d, FloorKind::erdogan_only);
        c.expect(erd && std::abs(*erd - (0.5 * d + 1.0 / 3.0)) <= 1e-9,
                 "erdogan-only threshold at d=" + std::to_string(d));
        const auto full = distance_set_threshold(d, FloorKind::full);
        c.expect(full && *full <= 0.5 * d + 5.0 / 12.0 + 1e-9,
                 "full-floor threshold at d=" + std::to_string(d));
    }
    for (int d = 2; d <= 8; ++d)
        for (double s = 0.55; s < 0.5 * d; s += 0.2)
            c.expect(std::abs(gamma_upper_wave(d, s, FloorKind::sjolin_only) -
                              (d + 1.0 - 2.0 * s)) <= 1e-9,
                     "flat-floor wave bound at d=" + std::to_string(d) + " s=" + num(s));
    for (int d = 3; d <= 10; ++d)
        c.expect(gamma_upper_wave(d, 1.0) < d - 1.0,
                 "energy-space bound not below d-1 at d=" + std::to_string(d));
    c.finish();
}

void criterion_5_mlinear() {
    Criterion c(5, "m-linear reduction at m = d", 0.0);
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 4 + static_cast<int>(rng.next_u64() % 9);
        const double a = rng.uniform(0.05, static_cast<double>(d));
        const double got = conjectural_beta_mlinear(d, a, d, MlinearVariant::conjectured);
        c.expect(std::abs(got - lower_multilinear_formula(d, a)) <= 1e-10,
                 "mismatch at d=" + std::to_string(d) + " alpha=" + num(a));
    }
    c.finish();
}

void criterion_6_spectral() {
    Criterion c(6, "spectral pipeline: sphere decay and synthetic laws", 60.0);
    const auto mu = make_sphere_measure(3, 12000);
    const auto quad = build_sphere_quadrature(3, 2000);
    const Vec grid = jittered_dyadic_grid(4.0, 64.0, 1, true);
    const auto curve = decay_scan(mu, grid, quad);
    const auto fit = fit_decay_exponent(curve, 0, curve.R.size());
    c.expect(std::abs(fit.beta - 2.0) <= 0.1, "sphere beta " + num(fit.beta) + " != 2 +- 0.1");

    DecayCurve syn;
    for (double R = 2.0; R <= 1024.0; R *= 2.0) {
        syn.R.push_back(R);
        syn.sigma.push_back(3.7 * std::pow(R, -1.234));
    }
    const auto sfit = fit_decay_exponent(syn, 0, syn.R.size());
    c.expect(std::abs(sfit.beta - 1.234) <= 1e-10, "synthetic law beta " + num(sfit.beta));
    c.finish();
}

void criterion_7_knapp() {
    Criterion c(7, "counterexample pipeline at three scales", 120.0);
    KnappSampling sampling;
    sampling.phase_pairs = 10000;
    sampling.lambda_samples = 128;
    sampling.calpha_centers = 96;
    sampling.seed = 11;
    std::vector<KnappReport> reports;
    for (std::int64_t n : {1, 2, 3}) {
        KnappConfig cfg;
        cfg.d = 4;
        cfg.n = n;
        cfg.kappa = 0.5;
        cfg.rho = 0.01;
        cfg.epsilon = 0.01;
        const auto rep = knapp_pipeline(cfg, sampling);
        reports.push_back(rep);
        c.expect(rep.phase_containment_fraction == 1.0,
                 "containment below 100% at n=" + std::to_string(n));
        c.expect(rep.min_extension_ratio >= 0.9,
                 "extension ratio " + num(rep.min_extension_ratio) + " at n=" + std::to_string(n));
        c.expect(rep.mass_ratio_normalized >= 0.25 && rep.mass_ratio_normalized <= 4.0,
                 "mass ratio " + num(rep.mass_ratio_normalized) + " at n=" + std::to_string(n));
    }
    const double implied = implied_beta_from_reports(reports);
    c.expect(implied <= 2.0 + 0.3, "implied beta " + num(implied) + " > 2.3");
    c.finish();
}

void criterion_8_number_theory() {
    Criterion c(8, "representation counts against the divisor formula", 10.0);
    for (std::int64_t n = 1; n <= 12; ++n)
        c.expect(static_cast<std::int64_t>(sum_of_squares_points(4, n * n).count()) ==
                     jacobi_r4(n * n),
                 "four-squares count mismatch at n=" + std::to_string(n));
    c.expect(sum_of_squares_points(3, 7).count() == 0, "r_3(7) must vanish");
    c.finish();
}

void criterion_9_c_alpha() {
    Criterion c(9, "dimensionality-constant estimator", 0.0);
    for (int d : {2, 3}) {
        for (double kappa : {1.0 / 3.0, 0.5, 2.0 / 3.0}) {
            const double alpha = d * (1.0 - kappa);
            const double R = 16.0, eps = 0.25;
            const auto muR = make_lattice_measure(d, R, kappa, eps, 1);
            const auto mu2R = make_lattice_measure(d, 2.0 * R, kappa, eps, 1);
            const double cR = c_alpha_estimate(muR, alpha, dyadic_radii(eps / R, 2.0)).value;
            const double c2R =
                c_alpha_estimate(mu2R, alpha, dyadic_radii(eps / (2.0 * R), 2.0)).value;
            const double got = std::log2(c2R / cR);
            const double want = std::max(-static_cast<double>(d) * kappa, alpha - d);
            c.expect(std::abs(got - want) <= 0.3, "log-ratio " + num(got) + " vs " + num(want) +
                                                      " at d=" + std::to_string(d) +
                                                      " kappa=" + num(kappa));
        }
    }
    // exact covariance under scaling
    const auto mu = make_cantor_measure(2, 0.25, 2);
    const double R = 8.0, alpha = 1.0;
    const auto muR = scale_measure(mu, R, alpha);
    Vec radii = dyadic_radii(1.0 / 64.0, 1.0), radiiR(radii);
    for (double& r : radiiR) r *= R;
    const double a = c_alpha_estimate(mu, alpha, radii).value;
    const double b = c_alpha_estimate(muR, alpha, radiiR).value;
    c.expect(std::abs(a - b) <= 1e-12, "covariance violated: " + num(a) + " vs " + num(b));
    c.finish();
}

void criterion_10_cap_engine() {
    Criterion c(10, "cap geometry: wedges, rescaling, tiling, ladders", 0.0);
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 4);
        std::vector<Vec> frame;
        for (int i = 0; i < d; ++i) {
            Vec v = rng.gaussian_vec(d);
            const double vn = norm(v);
            for (double& x : v) x /= vn;
            frame.push_back(std::move(v));
        }
        std::vector<Vec> gram(d, Vec(d));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) gram[i][j] = dot(frame[i], frame[j]);
        const double wedge = std::sqrt(std::max(0.0, detail::det_small(gram)));
        if (std::abs(wedge - std::abs(detail::det_small(frame))) > 1e-10) {
            c.expect(false, "gram wedge mismatch in trial " + std::to_string(trial));
            break;
        }
    }

    Phase par(PhaseKind::paraboloid, 2);
    const Phase twice = par.rescaled({0.15, -0.2}, 0.5).rescaled({0.1, 0.3}, 0.25);
    double worst = 0.0;
    for (double x = -0.45; x <= 0.45; x += 0.09)
        for (double y = -0.45; y <= 0.45; y += 0.09)
            worst = std::max(worst,
                             std::abs(twice.value({x, y}) - (-(x * x + y * y))));
    c.expect(worst <= 1e-12, "paraboloid rescaling drift " + num(worst));

    const Cap cap(par, {0.1, -0.05}, 0.25);
    const auto kids = cap_partition(cap, 5.0);
    double vol = 0.0;
    bool inside = true;
    for (const auto& k : kids) {
        vol += k.side * k.side;
        for (int ax = 0; ax < 2; ++ax)
            if (k.center[ax] - k.side / 2 < cap.center[ax] - cap.side / 2 - 1e-14 ||
                k.center[ax] + k.side / 2 > cap.center[ax] + cap.side / 2 + 1e-14)
                inside = false;
    }
    c.expect(std::abs(vol - cap.side * cap.side) <= 1e-14 && inside && kids.size() == 25,
             "tiling not exact");

    bool ladders_ok = true;
    for (double lr : {10.0, 24.0, 48.0})
        for (double e : {0.02, 0.04, 0.07}) {
            const ScaleLadder lad = build_scale_ladder(std::pow(2.0, lr), e, 3);
            for (int m = 2; m <= 3; ++m)
                if (!(lad.K_at(m) < lad.K_at(m + 1))) ladders_ok = false;
            if (!(lad.K_at(4) < std::pow(lad.R, lad.eps))) ladders_ok = false;
        }
    c.expect(ladders_ok, "ladder monotonicity/ceiling violated");
    c.finish();
}

void criterion_11_evolution() {
    Criterion c(11, "propagator oracles and the maximal-scaling slope", 300.0);
    // gaussian oracle
    const FrequencyDatum f1 = gaussian_datum(1, 1.0, 0.05, 9.0);
    double worst = 0.0;
    for (double t : {0.0, 0.1, 1.0})
        for (double x : {0.0, 0.6, 1.2})
            worst = std::max(worst, std::abs(truncated_propagator(f1, 2.0, t, {x}, 50.0) -
                                             gaussian_propagator_closed_form(1, 1.0, t, {x}, 50.0)));
    const FrequencyDatum f2 = gaussian_datum(2, 1.0, 0.15, 7.0);
    for (double t : {0.0, 0.1, 1.0})
        worst = std::max(worst, std::abs(truncated_propagator(f2, 2.0, t, {0.4, -0.3}, 40.0) -
                                         gaussian_propagator_closed_form(2, 1.0, t, {0.4, -0.3},
                                                                         40.0)));
    c.expect(worst <= 1e-6, "gaussian oracle error " + num(worst));

    // d'Alembert oracle
    double dworst = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        FrequencyDatum v0;
        v0.n = 1;
        v0.h = 0.25;
        Rng rng(500 + seed);
        for (double xi = -4.0; xi <= 4.0 + 1e-12; xi += 0.25) {
            v0.nodes.push_back({xi});
            v0.values.push_back(rng.complex_gaussian());
        }
        FrequencyDatum v1(v0);
        for (auto& v : v1.values) v = 0.0;
        const double t = rng.uniform(0.05, 0.9), x = rng.uniform(-1.0, 1.0);
        const cplx got = wave_solution(v0, v1, t, {x}, 50.0);
        const cplx want = 0.5 * (truncated_propagator(v0, 1.0, 0.0, {x + t}, 50.0) +
                                 truncated_propagator(v0, 1.0, 0.0, {x - t}, 50.0));
        dworst = std::max(dworst, std::abs(got - want));
    }
    c.expect(dworst <= 1e-6, "d'Alembert oracle error " + num(dworst));

    // energy conservation on a box
    {
        const FrequencyDatum f = gaussian_datum(1, 1.0, 0.1, 8.0);
        auto box_energy = [&](double t) {
            const double B = 14.0;
            const int M = 560;
            double acc = 0.0;
            for (int i = 0; i < M; ++i) {
                const double x = -B + 2.0 * B * (i + 0.5) / M;
                acc += std::norm(truncated_propagator(f, 2.0, t, {x}, 60.0)) * (2.0 * B / M);
            }
            return acc;
        };
        const double e0 = box_energy(0.0);
        for (double t : {0.5, 1.0})
            c.expect(std::abs(box_energy(t) - e0) <= 0.01 * e0, "energy drift at t=" + num(t));
    }

    // maximal-scaling slope
    DiscreteMeasure mu;
    mu.d = 1;
    mu.label = "uniform segment grid";
    const int M = 64;
    for (int i = 0; i < M; ++i) {
        mu.points.push_back({(i + 0.5) / M});
        mu.weights.push_back(1.0 / M);
    }
    const auto res = maximal_scaling_fit(1, mu, 1.0, {16.0, 32.0, 64.0, 128.0, 256.0}, 8);
    c.expect(res.slope >= 0.05 && res.slope <= 0.40,
             "fitted slope " + num(res.slope) + " outside [0.05, 0.40]");
    c.finish();
}

void criterion_12_diagnostics() {
    Criterion c(12, "diagnostic ratios against recorded baselines", 0.0);
    // Baselines recorded from the first run of this suite; the ratios are
    // empirical constants and 10% drift is the failure signal.
    const double baseline_probe = 0.014852320735;
    const double baseline_reproducing = 0.160926388800;

    const Phase par(PhaseKind::paraboloid, 1);
    const Cap cap(par, {0.0}, 0.5);
    const ScaleLadder lad = scale_ladder_from_scales(1e4, 0.1, 2, {4.0, 16.0});
    Vec probe_maxima;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        Rng rng(seed * 7919 + 1);
        std::vector<cplx> coefs;
        Vec shifts;
        for (int i = 0; i < 8; ++i) {
            coefs.push_back(rng.complex_gaussian());
            shifts.push_back(rng.uniform(-4.0, 4.0));
        }
        auto g = [&](const Vec& xi) {
            cplx acc = 0.0;
            for (int k = 0; k < 8; ++k)
                acc += coefs[k] * std::exp(cplx{0.0, 1.0} * (shifts[k] * xi[0]));
            return acc;
        };
        Rng prng(seed + 100);
        std::vector<Vec> pts;
        for (int i = 0; i < 50; ++i)
            pts.push_back({prng.uniform(-2.0, 2.0), prng.uniform(-2.0, 2.0)});
        probe_maxima.push_back(bg_inequality_probe(cap, g, lad, pts).max_ratio);
    }
    double probe_mean = 0.0;
    for (double m : probe_maxima) probe_mean += m / probe_maxima.size();

    BandLimited1D F;
    F.band_center = 3.0;
    F.band_width = 2.0;
    for (int i = 0; i < 1500; ++i) {
        const double x = -150.0 + 300.0 * i / 1499.0;
        F.x.push_back(x);
        const double env = std::exp(-x * x / 18.0);
        F.values.push_back(cplx{env * std::cos(3.0 * x), env * std::sin(3.0 * x)});
    }
    const double repr = reproducing_inequality_check(F, 2);

    std::printf("        measured: probe mean max-ratio %.12f, reproducing ratio %.12f\n",
                probe_mean, repr);
    if (baseline_probe > 0.0) {
        c.expect(std::abs(probe_mean - baseline_probe) <= 0.10 * baseline_probe,
                 "probe ratio drift: " + num(probe_mean) + " vs baseline " + num(baseline_probe));
        for (double m : probe_maxima)
            c.expect(std::abs(m - probe_mean) <= 0.10 * probe_mean,
                     "probe ratio unstable across seeds");
        c.expect(std::abs(repr - baseline_reproducing) <= 0.10 * baseline_reproducing,
                 "reproducing ratio drift: " + num(repr));
    } else {
        c.expect(false, "baselines not recorded yet");
    }
    c.finish();
}

}  // namespace

int main() {
    criterion_1_tables();
    criterion_2_dominance();
    criterion_3_coincidence();
    criterion_4_thresholds();
    criterion_5_mlinear();
    criterion_6_spectral();
    criterion_7_knapp();
    criterion_8_number_theory();
    criterion_9_c_alpha();
    criterion_10_cap_engine();
    criterion_11_evolution();
    criterion_12_diagnostics();
    if (g_failed) {
        std::printf("acceptance: %d criterion(s) FAILED\n", g_failed);
        return 1;
    }
    std::printf("acceptance: all criteria passed\n");
    return 0;
}
