#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fdl/bounds.hpp"
#include "fdl/common.hpp"

using namespace fdl;

TEST_CASE("two-dimensional table is exact") {
    struct Row {
        double alpha, want;
    };
    const Row rows[] = {{0.25, 0.25}, {0.5, 0.5}, {0.75, 0.5}, {1.0, 0.5}, {1.5, 0.75}, {2.0, 1.0}};
    for (const auto& r : rows)
        REQUIRE_THAT(beta_lower(2, r.alpha).value, Catch::Matchers::WithinAbs(r.want, 1e-12));
    REQUIRE(beta_lower(2, 1.0).provenance == "wolff table");
    REQUIRE(beta_lower(2, 0.25).provenance == "mattila table");
}

TEST_CASE("lower bound winners in higher dimension") {
    const auto q32 = beta_lower(3, 2.0);
    REQUIRE_THAT(q32.value, Catch::Matchers::WithinAbs(1.25, 1e-12));
    REQUIRE(q32.provenance == "erdogan");

    const auto q109 = beta_lower(10, 9.0);
    REQUIRE_THAT(q109.value, Catch::Matchers::WithinAbs(8.0 + 1.0 / 90.0, 1e-12));
    REQUIRE(q109.provenance == "multilinear");

    REQUIRE_THROWS_AS(beta_lower(3, 3.5), std::invalid_argument);
    REQUIRE_THROWS_AS(beta_lower(3, 0.0), std::invalid_argument);
}

TEST_CASE("upper bounds: coincidence at d=4 and the minimum rule") {
    for (int i = 0; i <= 200; ++i) {
        const double a = 2.0 + 2.0 * i / 200.0;
        REQUIRE_THAT(upper_sum_of_squares_formula(4, a),
                     Catch::Matchers::WithinAbs(upper_knapp_formula(4, a), 1e-12));
    }
    REQUIRE_THAT(beta_upper(5, 4.0).value, Catch::Matchers::WithinAbs(3.4, 1e-12));
    REQUIRE(beta_upper(5, 4.0).provenance == "sum-of-squares");
    REQUIRE_THAT(beta_upper(3, 1.0).value, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("piecewise tables are continuous at breakpoints") {
    for (int d = 2; d <= 10; ++d) {
        REQUIRE(beta_lower_table(d).max_breakpoint_jump() < 1e-12);
        REQUIRE(beta_upper_table(d).max_breakpoint_jump() < 1e-12);
    }
}

TEST_CASE("dominance and consistency on dense grids") {
    for (int d = 3; d <= 10; ++d) {
        const int N = 1000;
        bool erdogan_checked = false;
        for (int i = 1; i <= N; ++i) {
            const double a = d * static_cast<double>(i) / N;
            const double ml = lower_multilinear_formula(d, a);
            if (a < d) REQUIRE(ml > a - 1.0);  // strictly above the flat bound
            if (a >= 0.5 * d + 2.0 / 3.0 + 1.0 / d && a <= 0.5 * (d + 2.0)) {
                REQUIRE(ml >= lower_erdogan_formula(d, a) - 1e-12);
                erdogan_checked = true;
            }
            const double lo = beta_lower(d, a).value;
            const double hi = beta_upper(d, a).value;
            REQUIRE(lo <= hi + 1e-12);
            REQUIRE(hi - lo < 5.0 / 6.0);
            // equality only in the stated regions
            if (hi - lo < 1e-12) {
                const bool low_region = a <= 0.5 * (d - 1.0) + d * 1.5 / N;
                const bool top = a >= d - d * 1.5 / N;
                REQUIRE((low_region || top));
            }
        }
        // for d = 3 the improvement range collapses to its right endpoint
        if (d == 3) {
            REQUIRE(lower_multilinear_formula(3, 2.5) >= lower_erdogan_formula(3, 2.5) - 1e-12);
        } else {
            REQUIRE(erdogan_checked);
        }
    }
}

TEST_CASE("propagator dimension bound branches") {
    REQUIRE_THAT(alpha_upper_schrodinger(2, 0.45).value, Catch::Matchers::WithinAbs(1.8, 1e-12));
    REQUIRE_THAT(alpha_upper_schrodinger(3, 0.7).value, Catch::Matchers::WithinAbs(2.35, 1e-12));
    REQUIRE_THAT(alpha_upper_schrodinger(2, 0.75).value, Catch::Matchers::WithinAbs(0.5, 1e-12));
    const auto dk = alpha_upper_schrodinger(3, 0.4);
    REQUIRE(dk.provenance == "dahlberg-kenig regime");
    REQUIRE_THAT(dk.value, Catch::Matchers::WithinAbs(3.0, 1e-15));
    REQUIRE_THROWS_AS(alpha_upper_schrodinger(2, 1.5), std::invalid_argument);
    REQUIRE_THROWS_AS(alpha_upper_schrodinger(2, 0.0), std::invalid_argument);
}

TEST_CASE("wave solver reproduces the flat-floor formula") {
    for (int d : {2, 3, 5, 8}) {
        for (double s = 0.6; s < 0.5 * d; s += 0.17) {
            const double got = gamma_upper_wave(d, s, FloorKind::sjolin_only);
            REQUIRE_THAT(got, Catch::Matchers::WithinAbs(d + 1.0 - 2.0 * s, 1e-9));
        }
        // below s = 1/2 the flat floor never crosses: the solver returns d
        REQUIRE_THAT(gamma_upper_wave(d, 0.3, FloorKind::sjolin_only),
                     Catch::Matchers::WithinAbs(static_cast<double>(d), 1e-15));
    }
}

TEST_CASE("wave solver: full floor rules out divergence on spheres") {
    for (int d = 3; d <= 10; ++d) REQUIRE(gamma_upper_wave(d, 1.0) < d - 1.0);
}

TEST_CASE("wave solver: two-dimensional inversion and monotonicity") {
    REQUIRE_THAT(gamma_upper_wave(2, 0.75), Catch::Matchers::WithinAbs(1.0, 1e-6));
    double prev = 3.0;
    for (double s = 0.2; s < 1.5; s += 0.1) {
        const double g = gamma_upper_wave(3, s);
        REQUIRE(g <= prev + 1e-12);
        prev = g;
    }
    REQUIRE_THROWS_AS(gamma_upper_wave(3, 1.5), std::invalid_argument);
}

TEST_CASE("distance-set thresholds") {
    for (int d = 3; d <= 20; ++d) {
        const auto erd = distance_set_threshold(d, FloorKind::erdogan_only);
        REQUIRE(erd.has_value());
        REQUIRE_THAT(*erd, Catch::Matchers::WithinAbs(0.5 * d + 1.0 / 3.0, 1e-9));

        const auto full = distance_set_threshold(d, FloorKind::full);
        REQUIRE(full.has_value());
        REQUIRE(*full <= 0.5 * d + 5.0 / 12.0 + 1e-9);
    }
    // the multilinear-only floor crosses later; pinned for d = 3
    const auto ml = distance_set_threshold(3, FloorKind::multilinear_only);
    REQUIRE(ml.has_value());
    REQUIRE(*ml > 1.90);
    REQUIRE(*ml < 1.9167);
}

TEST_CASE("m-linear reduction collapses to the proven bound at m = d") {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 4 + static_cast<int>(rng.next_u64() % 9);
        const double a = rng.uniform(0.05, static_cast<double>(d));
        const double got = conjectural_beta_mlinear(d, a, d, MlinearVariant::conjectured);
        REQUIRE_THAT(got, Catch::Matchers::WithinAbs(lower_multilinear_formula(d, a), 1e-10));
    }
}

TEST_CASE("m-linear direct arithmetic") {
    // d=6, alpha=3.5, m=4, conjectured: plain plug-in
    const double d = 6, a = 3.5, m = 4;
    const double t1 = a - 1.0 + (d - a) * (d + m - 2 * a) / (2 * (m - 1) * (d + m - a - 1));
    const double t2 = a - 2 * a / (d + m);
    REQUIRE_THAT(conjectural_beta_mlinear(6, 3.5, 4, MlinearVariant::conjectured),
                 Catch::Matchers::WithinAbs(std::min(t1, t2), 1e-14));

    // at alpha = d the (d - alpha) factor vanishes: first term is d-1 and
    // the minimum is min(d-1, d - 2d/(d+m)) (resp. d - d/m)
    for (int m3 : {3, 4, 5}) {
        const double want_c = std::min(5.0, 6.0 - 12.0 / (6.0 + m3));
        REQUIRE_THAT(conjectural_beta_mlinear(6, 6.0, m3, MlinearVariant::conjectured),
                     Catch::Matchers::WithinAbs(want_c, 1e-14));
        const double want_p = std::min(5.0, 6.0 - 6.0 / m3);
        REQUIRE_THAT(conjectural_beta_mlinear(6, 6.0, m3, MlinearVariant::partial),
                     Catch::Matchers::WithinAbs(want_p, 1e-14));
    }
    REQUIRE_THROWS_AS(conjectural_beta_mlinear(6, 3.0, 2, MlinearVariant::partial),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(conjectural_beta_mlinear(6, 3.0, 7, MlinearVariant::partial),
                      std::invalid_argument);
}
