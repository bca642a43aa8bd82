// Fourier transforms of discrete measures on spherical shells, spherical
// L2 averages sigma(R) and log-log decay-exponent fits.
//
// Convention: mu_hat(xi) = sum_j w_j exp(-i xi.x_j), no 2*pi factor.
// Decay exponents are convention-invariant; absolute sigma values are not.
#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "fdl/common.hpp"
#include "fdl/io.hpp"
#include "fdl/measure.hpp"

namespace fdl {

enum class SphereScheme { equal_angle, spiral, monte_carlo };

inline const char* scheme_name(SphereScheme s) {
    switch (s) {
        case SphereScheme::equal_angle: return "equal-angle";
        case SphereScheme::spiral: return "spiral";
        default: return "monte-carlo";
    }
}

struct SphereQuadrature {
    int d = 0;
    std::vector<Vec> nodes;   // unit vectors
    Vec weights;              // sum to |S^{d-1}|
    SphereScheme scheme = SphereScheme::equal_angle;
    std::uint64_t seed = 0;

    double weight_sum() const {
        return pairwise_sum_d(weights.size(), [&](std::size_t i) { return weights[i]; });
    }
};

// d=2: equal angles (trapezoid rule, spectrally accurate on the circle);
// d=3: Fibonacci spiral; d>=4: seeded normalised-gaussian Monte Carlo.
inline SphereQuadrature build_sphere_quadrature(int d, std::size_t n, std::uint64_t seed = 0) {
    if (d < 2) throw std::invalid_argument("sphere quadrature: d >= 2 required");
    if (n < 2) throw std::invalid_argument("sphere quadrature: n >= 2 required");
    SphereQuadrature q;
    q.d = d;
    q.seed = seed;
    const double area = sphere_surface_area(d);
    q.nodes.reserve(n);
    q.weights.assign(n, area / static_cast<double>(n));
    if (d == 2) {
        q.scheme = SphereScheme::equal_angle;
        for (std::size_t j = 0; j < n; ++j) {
            const double th = 2.0 * pi * j / static_cast<double>(n);
            q.nodes.push_back({std::cos(th), std::sin(th)});
        }
    } else if (d == 3) {
        q.scheme = SphereScheme::spiral;
        for (std::size_t j = 0; j < n; ++j) q.nodes.push_back(detail::sphere3_spiral_point(j, n));
    } else {
        q.scheme = SphereScheme::monte_carlo;
        Rng rng(seed ^ 0x9d34ab1fULL);
        for (std::size_t j = 0; j < n; ++j) {
            Vec g = rng.gaussian_vec(d);
            double gn = norm(g);
            while (gn < 1e-12) {
                g = rng.gaussian_vec(d);
                gn = norm(g);
            }
            for (double& x : g) x /= gn;
            q.nodes.push_back(std::move(g));
        }
    }
    return q;
}

inline cplx fourier_transform_measure(const DiscreteMeasure& mu, const Vec& xi) {
    if (static_cast<int>(xi.size()) != mu.d)
        throw std::invalid_argument("fourier transform: frequency dimension mismatch");
    return pairwise_sum<cplx>(0, mu.size(), [&](std::size_t j) {
        const double ph = -dot(xi, mu.points[j]);
        return cplx{mu.weights[j] * std::cos(ph), mu.weights[j] * std::sin(ph)};
    });
}

// sigma(R) = sum_q w_q |mu_hat(R node_q)|^2.
inline double spherical_average(const DiscreteMeasure& mu, double R, const SphereQuadrature& quad) {
    if (quad.d != mu.d) throw std::invalid_argument("spherical average: dimension mismatch");
    if (!(R >= 0.0)) throw std::invalid_argument("spherical average: R >= 0 required");
    Vec per_node(quad.nodes.size());
    parallel_for(quad.nodes.size(), [&](std::size_t q) {
        const cplx v = fourier_transform_measure(mu, scaled(quad.nodes[q], R));
        per_node[q] = quad.weights[q] * std::norm(v);
    });
    return pairwise_sum_d(per_node.size(), [&](std::size_t q) { return per_node[q]; });
}

struct DecayCurve {
    Vec R;
    Vec sigma;
    std::string measure_label;
    std::string quadrature_tag;
    // Relative jackknife spread per point; populated for Monte Carlo
    // quadratures only (10 leave-one-block-out estimates).
    Vec jackknife_rel;

    std::string to_csv() const {
        CsvWriter w({"R", "sigma"});
        for (std::size_t i = 0; i < R.size(); ++i) w.add_row({fmt_g17(R[i]), fmt_g17(sigma[i])});
        return w.str();
    }
};

inline DecayCurve decay_scan(const DiscreteMeasure& mu, const Vec& R_grid,
                             const SphereQuadrature& quad) {
    for (std::size_t i = 1; i < R_grid.size(); ++i)
        if (!(R_grid[i] > R_grid[i - 1]))
            throw std::invalid_argument("decay scan: R grid must be strictly increasing");
    DecayCurve curve;
    curve.measure_label = mu.label;
    curve.quadrature_tag = scheme_name(quad.scheme);
    const double mass = mu.total_mass();
    const double cap = mass * mass * sphere_surface_area(mu.d);
    const bool mc = quad.scheme == SphereScheme::monte_carlo;
    const std::size_t nblocks = 10;
    for (double R : R_grid) {
        Vec per_node(quad.nodes.size());
        parallel_for(quad.nodes.size(), [&](std::size_t q) {
            const cplx v = fourier_transform_measure(mu, scaled(quad.nodes[q], R));
            per_node[q] = quad.weights[q] * std::norm(v);
        });
        const double s = pairwise_sum_d(per_node.size(), [&](std::size_t q) { return per_node[q]; });
        if (s > cap * (1.0 + 1e-9))
            throw NumericGuardError("decay scan: sigma exceeds mass^2 |S^{d-1}|");
        curve.R.push_back(R);
        curve.sigma.push_back(s);
        if (mc && quad.nodes.size() >= 2 * nblocks) {
            const std::size_t n = quad.nodes.size();
            double lo = 0.0, hi = 0.0;
            for (std::size_t b = 0; b < nblocks; ++b) {
                double part = 0.0, wpart = 0.0;
                for (std::size_t q = 0; q < n; ++q) {
                    if (q % nblocks == b) continue;
                    part += per_node[q];
                    wpart += quad.weights[q];
                }
                const double est = part * sphere_surface_area(mu.d) / wpart;
                if (b == 0) lo = hi = est;
                lo = std::min(lo, est);
                hi = std::max(hi, est);
            }
            curve.jackknife_rel.push_back(s > 0.0 ? (hi - lo) / s : 0.0);
        } else {
            curve.jackknife_rel.push_back(0.0);
        }
    }
    return curve;
}

struct ExponentFit {
    double beta = 0.0;    // sigma ~ R^{-beta}
    double stderr_ = 0.0;
    std::size_t window_lo = 0, window_hi = 0;  // [lo, hi)
    double residual = 0.0;

    json to_json() const {
        json j;
        j["beta"] = beta;
        j["stderr"] = stderr_;
        j["window"] = {window_lo, window_hi};
        j["residual"] = residual;
        return j;
    }
};

inline ExponentFit fit_decay_exponent(const DecayCurve& curve, std::size_t lo, std::size_t hi) {
    if (hi > curve.R.size() || lo >= hi || hi - lo < 3)
        throw std::invalid_argument("decay fit: window needs at least three points");
    Vec lx, ly;
    for (std::size_t i = lo; i < hi; ++i) {
        if (!(curve.sigma[i] > 0.0))
            throw NumericGuardError("decay fit: non-positive sigma in window (quadrature underflow)");
        if (i < curve.jackknife_rel.size() && curve.jackknife_rel[i] > 0.2)
            throw NumericGuardError("decay fit: jackknife spread above 20% of sigma in window");
        lx.push_back(std::log(curve.R[i]));
        ly.push_back(std::log(curve.sigma[i]));
    }
    const LineFit f = fit_line(lx, ly);
    ExponentFit out;
    out.beta = -f.slope;
    out.stderr_ = f.slope_stderr;
    out.window_lo = lo;
    out.window_hi = hi;
    out.residual = f.residual_norm;
    return out;
}

// Dyadic R grid with multiplicative jitter 1 +/- 0.05 from a seeded
// generator.  With avoid_sinc_zeros the draw keeps, per octave, the
// seeded candidate farthest from a zero of sin R; radial measures such as
// the sphere have sigma proportional to sin^2 R there, and landing near a
// zero corrupts a five-point log-log fit.
inline Vec jittered_dyadic_grid(double R_min, double R_max, std::uint64_t seed,
                                bool avoid_sinc_zeros = false) {
    Rng rng(seed ^ 0x6a77e201ULL);
    Vec out;
    for (double R = R_min; R <= R_max * (1.0 + 1e-12); R *= 2.0) {
        if (!avoid_sinc_zeros) {
            out.push_back(R * rng.uniform(0.95, 1.05));
            continue;
        }
        double best = R, best_score = -1.0;
        for (int c = 0; c < 64; ++c) {
            const double cand = R * rng.uniform(0.95, 1.05);
            const double score = std::abs(std::sin(cand));
            if (score > best_score) {
                best_score = score;
                best = cand;
            }
        }
        out.push_back(best);
    }
    return out;
}

}  // namespace fdl
