// Discrete fractal measures in the closed unit ball and brute-force
// estimation of their dimensionality constants.
//
// A measure is a finite weighted point cloud; absolutely continuous
// pieces are represented by midpoint quadrature, so one representation
// feeds every downstream oscillatory sum.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fdl/common.hpp"
#include "fdl/io.hpp"

namespace fdl {

struct DiscreteMeasure {
    int d = 0;
    std::vector<Vec> points;
    Vec weights;
    std::string label;
    // Set by scale_measure when support may leave the unit ball.
    bool expanded_support = false;

    double total_mass() const {
        return pairwise_sum_d(weights.size(), [&](std::size_t i) { return weights[i]; });
    }

    std::size_t size() const { return points.size(); }

    void validate() const {
        if (d < 1) throw std::invalid_argument("measure: dimension must be >= 1");
        if (points.empty() || points.size() != weights.size())
            throw std::invalid_argument("measure: points/weights must be non-empty and match");
        for (const auto& p : points) {
            if (static_cast<int>(p.size()) != d)
                throw std::invalid_argument("measure: point dimension mismatch");
            if (!expanded_support && norm(p) > 1.0 + 1e-12)
                throw std::invalid_argument("measure: support must lie in the closed unit ball");
        }
        for (double w : weights)
            if (!(w >= 0.0)) throw std::invalid_argument("measure: weights must be >= 0");
    }
};

struct AlphaConstantReport {
    double alpha = 0.0;
    double value = 0.0;       // estimated c_alpha, max of mu(B(x,r))/r^alpha
    Vec witness_center;
    double witness_radius = 0.0;
    Vec radii_probed;
};

// chi_Lambda dx with Lambda = (R^{kappa-1} Z^d + B(0, eps/R)) ^ B(0,1),
// discretised by samples_per_ball equal-weight points per small ball.
// Each ball carries its full volume (eps/R)^d * omega_d, so the total
// mass is (number of lattice centres in the unit ball) * ball volume.
inline DiscreteMeasure make_lattice_measure(int d, double R, double kappa, double epsilon,
                                            int samples_per_ball) {
    if (d < 2) throw std::invalid_argument("lattice measure: d >= 2 required");
    if (!(R > 1.0)) throw std::invalid_argument("lattice measure: R > 1 required");
    if (!(kappa > 0.0 && kappa < 1.0))
        throw std::invalid_argument("lattice measure: kappa in (0,1) required");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("lattice measure: epsilon in (0,1) required");
    if (samples_per_ball < 1)
        throw std::invalid_argument("lattice measure: samples_per_ball >= 1 required");

    const double spacing = std::pow(R, kappa - 1.0);
    if (spacing >= 2.0)
        throw std::invalid_argument("lattice measure: spacing R^{kappa-1} >= 2 leaves no interior lattice cell");

    const double r_ball = epsilon / R;
    const double ball_vol = unit_ball_volume(d) * std::pow(r_ball, d);

    DiscreteMeasure mu;
    mu.d = d;
    mu.label = "lattice R=" + fmt_g17(R) + " kappa=" + fmt_g17(kappa) +
               " eps=" + fmt_g17(epsilon);

    // Recursive enumeration of z in Z^d with |z| <= 1/spacing.
    Rng rng(0x5eed0001ULL);  // fixed documented seed for ball sampling
    std::vector<int> z(d, 0);
    auto emit_center = [&](const std::vector<int>& zz) {
        Vec c(d);
        for (int i = 0; i < d; ++i) c[i] = spacing * zz[i];
        if (samples_per_ball == 1) {
            mu.points.push_back(c);
            mu.weights.push_back(ball_vol);
            return;
        }
        const double w = ball_vol / samples_per_ball;
        for (int s = 0; s < samples_per_ball; ++s) {
            // uniform in the ball: gaussian direction, radius ~ u^{1/d}
            Vec g = rng.gaussian_vec(d);
            const double gn = norm(g);
            const double rad = r_ball * std::pow(rng.uniform(), 1.0 / d);
            Vec p(d);
            for (int i = 0; i < d; ++i) p[i] = c[i] + (gn > 0 ? rad * g[i] / gn : 0.0);
            // Lambda is intersected with B(0,1): clip stragglers radially.
            const double pn = norm(p);
            if (pn > 1.0)
                for (double& x : p) x /= pn;
            mu.points.push_back(p);
            mu.weights.push_back(w);
        }
    };
    const double rad2_max = 1.0 / (spacing * spacing) + 1e-12;
    std::function<void(int, double)> rec = [&](int axis, double partial2) {
        if (axis == d) {
            emit_center(z);
            return;
        }
        const int lim = static_cast<int>(std::floor(std::sqrt(std::max(0.0, rad2_max - partial2)) + 1e-12));
        for (int v = -lim; v <= lim; ++v) {
            z[axis] = v;
            const double p2 = partial2 + static_cast<double>(v) * v;
            if (p2 <= rad2_max) rec(axis + 1, p2);
        }
    };
    rec(0, 0.0);
    mu.validate();
    return mu;
}

// Generation-`depth` self-similar measure of the d-fold product of the
// two-interval Cantor construction with contraction `ratio`, rescaled
// into B(0,1).  Nominal dimension d*log2/log(1/ratio) goes in the label.
inline DiscreteMeasure make_cantor_measure(int d, double ratio, int depth,
                                           std::size_t point_budget = 1u << 20) {
    if (d < 1) throw std::invalid_argument("cantor measure: d >= 1 required");
    if (!(ratio > 0.0 && ratio < 0.5))
        throw std::invalid_argument("cantor measure: ratio in (0, 1/2) required");
    if (depth < 1) throw std::invalid_argument("cantor measure: depth >= 1 required");
    const double cells_d = std::pow(2.0, static_cast<double>(d) * depth);
    if (cells_d > static_cast<double>(point_budget))
        throw std::invalid_argument("cantor measure: 2^(d*depth) exceeds the point budget");

    // 1-D cell centres at the given generation, inside [0,1].
    std::vector<double> centers1{0.5};
    double half = 0.5;
    for (int g = 0; g < depth; ++g) {
        half *= ratio;
        std::vector<double> next;
        next.reserve(centers1.size() * 2);
        for (double c : centers1) {
            const double lo = c - half / ratio, hi = c + half / ratio;
            next.push_back(lo + half);
            next.push_back(hi - half);
        }
        centers1.swap(next);
    }

    const std::size_t n1 = centers1.size();
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= n1;

    DiscreteMeasure mu;
    mu.d = d;
    const double alpha_nominal = d * std::log(2.0) / std::log(1.0 / ratio);
    mu.label = "cantor ratio=" + fmt_g17(ratio) + " depth=" + std::to_string(depth) +
               " alpha=" + fmt_g17(alpha_nominal);
    const double w = 1.0 / static_cast<double>(total);
    const double scale = 2.0 / std::sqrt(static_cast<double>(d));  // cube corners into B(0,1)
    mu.points.reserve(total);
    mu.weights.assign(total, w);
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t k = 0; k < total; ++k) {
        Vec p(d);
        for (int i = 0; i < d; ++i) p[i] = (centers1[idx[i]] - 0.5) * scale;
        mu.points.push_back(std::move(p));
        for (int i = 0; i < d; ++i) {
            if (++idx[i] < n1) break;
            idx[i] = 0;
        }
    }
    mu.validate();
    return mu;
}

namespace detail {

// Fibonacci spiral on S^2.
inline Vec sphere3_spiral_point(std::size_t j, std::size_t n) {
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    const double z = 1.0 - (2.0 * j + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * pi * std::fmod(j / golden, 1.0);
    return {r * std::cos(phi), r * std::sin(phi), z};
}

}  // namespace detail

// Near-uniform unit-mass point measure on S^{d-1}: exact equal angles for
// d=2, Fibonacci spiral for d=3, seeded normalised gaussians for d >= 4.
inline DiscreteMeasure make_sphere_measure(int d, std::size_t n_points,
                                           std::uint64_t seed = 0x5eed0002ULL) {
    if (d < 2) throw std::invalid_argument("sphere measure: d >= 2 required");
    if (n_points < 2) throw std::invalid_argument("sphere measure: n_points >= 2 required");
    DiscreteMeasure mu;
    mu.d = d;
    mu.label = "sphere d=" + std::to_string(d) + " n=" + std::to_string(n_points);
    mu.points.reserve(n_points);
    mu.weights.assign(n_points, 1.0 / static_cast<double>(n_points));
    if (d == 2) {
        for (std::size_t j = 0; j < n_points; ++j) {
            const double th = 2.0 * pi * j / static_cast<double>(n_points);
            mu.points.push_back({std::cos(th), std::sin(th)});
        }
    } else if (d == 3) {
        for (std::size_t j = 0; j < n_points; ++j)
            mu.points.push_back(detail::sphere3_spiral_point(j, n_points));
    } else {
        Rng rng(seed);
        for (std::size_t j = 0; j < n_points; ++j) {
            Vec g = rng.gaussian_vec(d);
            double gn = norm(g);
            while (gn < 1e-12) {
                g = rng.gaussian_vec(d);
                gn = norm(g);
            }
            for (double& x : g) x /= gn;
            mu.points.push_back(std::move(g));
        }
    }
    mu.validate();
    return mu;
}

// mu_R with dmu_R(x) = R^alpha dmu(x/R): points scale by R, weights by
// R^alpha.  The result may leave B(0,1) and is flagged accordingly.
inline DiscreteMeasure scale_measure(const DiscreteMeasure& mu, double R, double alpha) {
    if (!(R >= 1.0)) throw std::invalid_argument("scale_measure: R >= 1 required");
    DiscreteMeasure out;
    out.d = mu.d;
    out.label = mu.label + " scaled R=" + fmt_g17(R);
    out.expanded_support = true;
    const double wf = std::pow(R, alpha);
    out.points.reserve(mu.size());
    out.weights.reserve(mu.size());
    for (const auto& p : mu.points) out.points.push_back(scaled(p, R));
    for (double w : mu.weights) out.weights.push_back(wf * w);
    out.validate();
    return out;
}

namespace detail {

// One pass over the points per centre: distances are bucketed into the
// sorted radius grid, then a prefix sum yields mu(B(c,r)) for every r.
inline void ball_masses(const DiscreteMeasure& mu, const Vec& center, const Vec& radii_sorted,
                        Vec& out_mass) {
    const std::size_t nr = radii_sorted.size();
    out_mass.assign(nr, 0.0);
    std::vector<Vec> buckets(nr);
    for (auto& b : buckets) b.reserve(8);
    for (std::size_t j = 0; j < mu.size(); ++j) {
        const double r = dist(mu.points[j], center);
        // smallest radius with r <= radius (closed balls)
        const auto it = std::lower_bound(radii_sorted.begin(), radii_sorted.end(),
                                         r * (1.0 - 1e-12));
        if (it == radii_sorted.end()) continue;
        buckets[static_cast<std::size_t>(it - radii_sorted.begin())].push_back(mu.weights[j]);
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < nr; ++k) {
        acc += pairwise_sum_d(buckets[k].size(), [&](std::size_t i) { return buckets[k][i]; });
        out_mass[k] = acc;
    }
}

inline AlphaConstantReport c_alpha_over_centers(const DiscreteMeasure& mu, double alpha,
                                                const Vec& radii,
                                                const std::vector<Vec>& centers) {
    if (radii.empty()) throw std::invalid_argument("c_alpha: radii list must be non-empty");
    for (double r : radii)
        if (!(r > 0.0)) throw std::invalid_argument("c_alpha: radii must be positive");
    if (!(alpha > 0.0 && alpha <= mu.d + 1e-12))
        throw std::invalid_argument("c_alpha: alpha in (0, d] required");

    Vec rs(radii);
    std::sort(rs.begin(), rs.end());
    Vec rpow(rs.size());
    for (std::size_t k = 0; k < rs.size(); ++k) rpow[k] = std::pow(rs[k], alpha);

    AlphaConstantReport rep;
    rep.alpha = alpha;
    rep.radii_probed = rs;

    std::vector<double> best_val(centers.size(), -1.0);
    std::vector<std::size_t> best_k(centers.size(), 0);
    parallel_for(centers.size(), [&](std::size_t ci) {
        Vec mass;
        ball_masses(mu, centers[ci], rs, mass);
        for (std::size_t k = 0; k < rs.size(); ++k) {
            const double v = mass[k] / rpow[k];
            if (v > best_val[ci]) {
                best_val[ci] = v;
                best_k[ci] = k;
            }
        }
    });
    for (std::size_t ci = 0; ci < centers.size(); ++ci) {
        if (best_val[ci] > rep.value) {
            rep.value = best_val[ci];
            rep.witness_center = centers[ci];
            rep.witness_radius = rs[best_k[ci]];
        }
    }
    return rep;
}

}  // namespace detail

// Lower bound for c_alpha(mu) = sup mu(B(x,r))/r^alpha: the sup is taken
// over all support points plus caller centres, and the caller's radii.
// For dyadic radii spanning the measure's scales this is a constant-factor
// estimate of the true constant.
inline AlphaConstantReport c_alpha_estimate(const DiscreteMeasure& mu, double alpha,
                                            const Vec& radii,
                                            const std::vector<Vec>& extra_centers = {}) {
    std::vector<Vec> centers = mu.points;
    centers.insert(centers.end(), extra_centers.begin(), extra_centers.end());
    return detail::c_alpha_over_centers(mu, alpha, radii, centers);
}

// Same estimator restricted to an explicit centre list; used by large
// constructions where the full support sweep is redundant by symmetry.
inline AlphaConstantReport c_alpha_estimate_at(const DiscreteMeasure& mu, double alpha,
                                               const Vec& radii,
                                               const std::vector<Vec>& centers) {
    return detail::c_alpha_over_centers(mu, alpha, radii, centers);
}

inline Vec dyadic_radii(double r_min, double r_max) {
    Vec out;
    for (double r = r_min; r <= r_max * (1.0 + 1e-12); r *= 2.0) out.push_back(r);
    return out;
}

inline json measure_to_json(const DiscreteMeasure& mu) {
    json j;
    j["d"] = mu.d;
    j["label"] = mu.label;
    j["points"] = json::array();
    for (const auto& p : mu.points) j["points"].push_back(p);
    j["weights"] = mu.weights;
    return j;
}

inline DiscreteMeasure measure_from_json(const json& j) {
    DiscreteMeasure mu;
    mu.d = j.at("d").get<int>();
    mu.label = j.value("label", "");
    for (const auto& p : j.at("points")) mu.points.push_back(p.get<Vec>());
    mu.weights = j.at("weights").get<Vec>();
    for (const auto& p : mu.points)
        if (norm(p) > 1.0 + 1e-12) {
            mu.expanded_support = true;
            break;
        }
    mu.validate();
    return mu;
}

}  // namespace fdl
