// Single-level diagnostics for the multilinear cap decomposition: the
// quotient Phi attached to a subspace and a next-scale cap, a pointwise
// probe of the decomposition inequality, and the one-dimensional
// self-reproducing majorant check.
//
// These report empirical constants; none of the underlying inequalities
// fixes its absolute constant, so drift against a recorded baseline is
// the failure signal, not the constant itself.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "fdl/caps.hpp"
#include "fdl/common.hpp"

namespace fdl {

struct BgOptions {
    int grid_nodes = 6;     // per-axis frequency nodes per cap
    int conv_nodes = 13;    // per-axis quadrature nodes for the mollifier
    double conv_extent = 8.0;  // kernel truncated at this many dual-cuboid half-widths
    double c_eps = 0.0;        // 0: use ambient dimension + 1
};

namespace detail {

// (F * zeta_{K dual})(pt) by tensor midpoint quadrature over the rotated
// truncated support.
inline double conv_with_zeta(const std::function<double(const Vec&)>& F, const DualCuboid& dual,
                             double K, double c_eps, const Vec& pt, const BgOptions& opt) {
    const int d = static_cast<int>(dual.rotation.size());
    Vec half(d);
    for (int i = 0; i < d - 1; ++i) half[i] = opt.conv_extent * K / dual.side;
    half[d - 1] = opt.conv_extent * K / (dual.side * dual.side);
    const int N = opt.conv_nodes;
    double vol = 1.0;
    for (int i = 0; i < d; ++i) vol *= 2.0 * half[i] / N;

    std::vector<int> idx(d, 0);
    const std::size_t total = static_cast<std::size_t>(std::pow(N, d));
    Vec terms(total);
    for (std::size_t t = 0; t < total; ++t) {
        Vec yf(d);
        for (int i = 0; i < d; ++i) yf[i] = -half[i] + 2.0 * half[i] * (idx[i] + 0.5) / N;
        const Vec y = dual.from_frame(yf);
        Vec arg(pt);
        for (int i = 0; i < d; ++i) arg[i] -= y[i];
        terms[t] = F(arg) * mollifier_zeta(dual, K, c_eps, y);
        for (int i = 0; i < d; ++i) {
            if (++idx[i] < N) break;
            idx[i] = 0;
        }
    }
    return vol * pairwise_sum_d(total, [&](std::size_t t) { return terms[t]; });
}

inline bool cap_inside(const Cap& child, const Cap& parent) {
    for (std::size_t i = 0; i < child.center.size(); ++i)
        if (std::abs(child.center[i] - parent.center[i]) >
            0.5 * (parent.side - child.side) + 1e-9)
            return false;
    return true;
}

inline std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> pick(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == k) {
            out.push_back(pick);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            pick[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return out;
}

struct CapData {
    Cap cap;
    GridFunction grid;
    DualCuboid dual;
};

}  // namespace detail

// Single-level evaluation of the decomposition quotient at spacetime
// points (x_1..x_{d-1}, t).  `basis` spans the m-plane; m = 1 returns 1
// identically.  The ladder supplies K_m, K_{m+1} (rounded to nested
// divisors) and the R^{-1/eps} loss uses `R_loss`.
inline Vec phi_evaluate(const Cap& parent, const std::vector<Vec>& basis, const Cap& tau_next,
                        const std::function<cplx(const Vec&)>& g,
                        const std::vector<Vec>& points, const ScaleLadder& ladder, double R_loss,
                        const BgOptions& opt = {}) {
    const int d = parent.ambient_dim();
    const std::size_t m = basis.size();
    if (m < 1 || m > static_cast<std::size_t>(d - 1))
        throw std::invalid_argument("phi: m in [1, d-1] required");
    if (m == 1) return Vec(points.size(), 1.0);

    const double c_eps = opt.c_eps > 0.0 ? opt.c_eps : d + 1.0;
    const int k_m = std::max<int>(2, static_cast<int>(std::llround(ladder.K_at(m))));
    const int k_next =
        std::max<int>(2, static_cast<int>(std::llround(ladder.K_at(static_cast<int>(m) + 1))));
    if (k_next % k_m != 0)
        throw std::invalid_argument("phi: ladder scales must nest (K_{m+1} multiple of K_m)");
    if (std::abs(tau_next.side - parent.side / k_next) > 1e-9 * parent.side)
        throw std::invalid_argument("phi: tau_next must sit at scale delta/K_{m+1}");

    const GridFunction parent_grid = sample_on_cap(parent, opt.grid_nodes * k_next, g);
    const double g_l2 = parent_grid.l2_norm();
    if (g_l2 == 0.0) throw NumericGuardError("phi: zero data");

    // candidate caps
    const std::vector<Cap> fine = cap_partition(parent, k_next);
    std::vector<Cap> selected = v_set_select(parent, fine, basis, k_next);
    const std::vector<Cap> coarse = cap_partition(parent, k_m);

    // evaluation caches
    std::vector<detail::CapData> sel;
    for (const auto& c : selected)
        sel.push_back({c, sample_on_cap(c, opt.grid_nodes, g), dual_cuboid(c)});
    detail::CapData next{tau_next, sample_on_cap(tau_next, opt.grid_nodes, g),
                         dual_cuboid(tau_next)};
    const bool next_in_selected = [&] {
        for (const auto& s : sel)
            if (dist(s.cap.center, tau_next.center) < 1e-12) return true;
        return false;
    }();
    const DualCuboid parent_dual = dual_cuboid(parent);

    auto T_abs = [&](const detail::CapData& cd) {
        return [&cd](const Vec& pt) {
            Vec x(pt.begin(), pt.end() - 1);
            return std::abs(extension_operator(cd.cap, cd.grid, x, pt.back()));
        };
    };
    // |T^V_{tau_k} g| for the coarse cap k: sum of selected fine caps inside
    auto TV_abs = [&](std::size_t coarse_idx) {
        const Cap& ck = coarse[coarse_idx];
        std::vector<const detail::CapData*> members;
        for (const auto& s : sel)
            if (detail::cap_inside(s.cap, ck)) members.push_back(&s);
        return [members](const Vec& pt) {
            Vec x(pt.begin(), pt.end() - 1);
            cplx acc = 0.0;
            for (const auto* s : members)
                acc += extension_operator(s->cap, s->grid, x, pt.back());
            return std::abs(acc);
        };
    };

    // transversal m-tuples of coarse caps
    const double theta = std::pow(static_cast<double>(k_m), -static_cast<double>(m));
    std::vector<std::vector<std::size_t>> tuples;
    for (const auto& combo : detail::combinations(coarse.size(), m)) {
        std::vector<Cap> tup;
        for (auto i : combo) tup.push_back(coarse[i]);
        if (transversality_constant(tup) > theta) tuples.push_back(combo);
    }

    const double loss = std::pow(R_loss, -1.0 / ladder.eps) * g_l2;
    const double pref = std::pow(static_cast<double>(k_m), 2.0 * m);

    Vec out(points.size());
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        const Vec& pt = points[pi];
        double best_tuple = 0.0;
        for (const auto& combo : tuples) {
            double prod = 1.0;
            for (auto ci : combo) {
                auto f = TV_abs(ci);
                auto froot = [&f, m](const Vec& q) { return std::pow(f(q), 1.0 / m); };
                prod *= detail::conv_with_zeta(froot, parent_dual, k_m, c_eps, pt, opt);
            }
            best_tuple = std::max(best_tuple, prod);
        }
        const double next_term =
            detail::conv_with_zeta(T_abs(next), next.dual, 1.0, c_eps, pt, opt);
        const double numer = pref * best_tuple + next_term;

        double sq = next_in_selected ? 0.0 : next_term * next_term;
        for (const auto& s : sel) {
            const double c = detail::conv_with_zeta(T_abs(s), s.dual, 1.0, c_eps, pt, opt);
            sq += c * c;
        }
        const double denom = std::sqrt(sq) + loss;
        out[pi] = numer / denom;
    }
    return out;
}

struct ProbeStats {
    Vec lhs;
    Vec rhs;
    Vec ratios;
    double max_ratio = 0.0;
};

struct ConstancyReport {
    double max_value = 0.0;
    double min_value = 0.0;

    double oscillation() const { return min_value > 0.0 ? max_value / min_value : 0.0; }
};

// Oscillation of the mollified extension |T_tau g| * zeta_{tau'} across
// one dual-cuboid translate around `center`.  The working definition of
// "essentially constant" used by the diagnostics is a factor-of-4
// oscillation bound; callers report violations rather than asserting.
inline ConstancyReport essential_constancy_probe(const Cap& cap,
                                                 const std::function<cplx(const Vec&)>& g,
                                                 const Vec& center, const BgOptions& opt = {}) {
    const int d = cap.ambient_dim();
    const double c_eps = opt.c_eps > 0.0 ? opt.c_eps : d + 1.0;
    const GridFunction grid = sample_on_cap(cap, opt.grid_nodes, g);
    const DualCuboid dual = dual_cuboid(cap);
    auto mollified = [&](const Vec& pt) {
        auto f = [&](const Vec& q) {
            Vec x(q.begin(), q.end() - 1);
            return std::abs(extension_operator(cap, grid, x, q.back()));
        };
        return detail::conv_with_zeta(f, dual, 1.0, c_eps, pt, opt);
    };
    ConstancyReport rep;
    bool first = true;
    // centre plus the corners of the dual cuboid translate
    for (std::size_t mask = 0; mask < (1u << d) + 1u; ++mask) {
        Vec off(d, 0.0);
        if (mask < (1u << d)) {
            for (int i = 0; i < d - 1; ++i)
                off[i] = (mask >> i & 1u) ? 0.5 / cap.side : -0.5 / cap.side;
            off[d - 1] = (mask >> (d - 1) & 1u) ? 0.5 / (cap.side * cap.side)
                                                : -0.5 / (cap.side * cap.side);
            off = dual.from_frame(off);
        }
        Vec pt(center);
        for (int i = 0; i < d; ++i) pt[i] += off[i];
        const double v = mollified(pt);
        if (first) {
            rep.max_value = rep.min_value = v;
            first = false;
        } else {
            rep.max_value = std::max(rep.max_value, v);
            rep.min_value = std::min(rep.min_value, v);
        }
    }
    return rep;
}

// Pointwise probe of the pre-mollifier decomposition inequality:
// |T_tau g| against the d-transversal product family, the
// subspace-restricted family, and the single-cap maxima.  The reported
// max of LHS/RHS measures the inequality's unspecified constant; small
// scales and d = 2 or 3 only.
inline ProbeStats bg_inequality_probe(const Cap& cap, const std::function<cplx(const Vec&)>& g,
                                      const ScaleLadder& ladder, const std::vector<Vec>& points,
                                      const BgOptions& opt = {}) {
    const int d = cap.ambient_dim();
    if (d != 2 && d != 3) throw std::invalid_argument("probe: d = 2 or 3 only");
    const int k2 = std::max<int>(2, static_cast<int>(std::llround(ladder.K_at(2))));
    if (k2 > 8) throw std::invalid_argument("probe: K_2 <= 8 only");

    const int kd = std::max<int>(2, static_cast<int>(std::llround(ladder.K_at(d))));
    const GridFunction parent_grid = sample_on_cap(cap, opt.grid_nodes * kd, g);

    // caps at each ladder scale, with their grids
    std::vector<std::vector<detail::CapData>> levels;  // index by m-2 for K_m
    for (int m = 2; m <= d; ++m) {
        const int km = std::max<int>(2, static_cast<int>(std::llround(ladder.K_at(m))));
        std::vector<detail::CapData> level;
        for (const auto& c : cap_partition(cap, km))
            level.push_back({c, sample_on_cap(c, opt.grid_nodes, g), dual_cuboid(c)});
        levels.push_back(std::move(level));
    }
    const auto& fine = levels.back();  // scale delta/K_d

    auto eval_abs = [](const detail::CapData& cd, const Vec& pt) {
        Vec x(pt.begin(), pt.end() - 1);
        return std::abs(extension_operator(cd.cap, cd.grid, x, pt.back()));
    };

    const double theta_d = std::pow(static_cast<double>(kd), -static_cast<double>(d));
    std::vector<std::vector<std::size_t>> tuples_d;
    for (const auto& combo : detail::combinations(fine.size(), d)) {
        std::vector<Cap> tup;
        for (auto i : combo) tup.push_back(fine[i].cap);
        if (transversality_constant(tup) > theta_d) tuples_d.push_back(combo);
    }

    ProbeStats stats;
    const double pref_d = std::pow(static_cast<double>(kd), 2.0 * d);
    for (const auto& pt : points) {
        Vec x(pt.begin(), pt.end() - 1);
        const double lhs = std::abs(extension_operator(cap, parent_grid, x, pt.back()));

        double fam1 = 0.0;
        for (const auto& combo : tuples_d) {
            double prod = 1.0;
            for (auto ci : combo) prod *= std::pow(eval_abs(fine[ci], pt), 1.0 / d);
            fam1 = std::max(fam1, prod);
        }
        fam1 *= pref_d;

        // subspace-restricted pairs at scale delta/K_2 (d = 3 only)
        double fam2 = 0.0;
        if (d == 3) {
            const auto& mid = levels.front();
            const double theta2 = std::pow(static_cast<double>(k2), -2.0);
            for (const auto& combo : detail::combinations(mid.size(), 2)) {
                std::vector<Cap> tup{mid[combo[0]].cap, mid[combo[1]].cap};
                if (!(transversality_constant(tup) > theta2)) continue;
                std::vector<Vec> basis;
                for (const auto& c : tup) {
                    Vec y = c.central_normal();
                    for (const auto& b : basis) {
                        const double pr = dot(y, b);
                        for (std::size_t k = 0; k < y.size(); ++k) y[k] -= pr * b[k];
                    }
                    const double yn = norm(y);
                    if (yn > 1e-10) {
                        for (double& v : y) v /= yn;
                        basis.push_back(std::move(y));
                    }
                }
                if (basis.size() != 2) continue;
                double prod = 1.0;
                for (const auto& ck : tup) {
                    cplx acc = 0.0;
                    for (const auto& f : fine)
                        if (detail::cap_inside(f.cap, ck)) {
                            double best = 1e300;
                            for (const auto& p : f.cap.sample_points(2))
                                best = std::min(best,
                                                dist_to_span(normal_at(f.cap.phase, p), basis));
                            if (best <= cap.side / kd)
                                acc += extension_operator(f.cap, f.grid, x, pt.back());
                        }
                    prod *= std::sqrt(std::abs(acc));
                }
                fam2 = std::max(fam2, prod);
            }
            fam2 *= std::pow(static_cast<double>(k2), 4.0);
        }

        // single-cap maxima at every ladder scale
        double fam3 = 0.0;
        for (const auto& level : levels) {
            double best = 0.0;
            for (const auto& cd : level) best = std::max(best, eval_abs(cd, pt));
            fam3 += best;
        }

        const double rhs = fam1 + fam2 + fam3;
        stats.lhs.push_back(lhs);
        stats.rhs.push_back(rhs);
        stats.ratios.push_back(rhs > 0.0 ? lhs / rhs : 0.0);
    }
    for (double r : stats.ratios) stats.max_ratio = std::max(stats.max_ratio, r);
    return stats;
}

// ---- one-dimensional reproducing majorant --------------------------------

// Uniform samples of a band-limited signal: spectrum inside
// [band_center - band_width/2, band_center + band_width/2].
struct BandLimited1D {
    Vec x;                     // uniform grid
    std::vector<cplx> values;
    double band_center = 0.0;
    double band_width = 1.0;

    double spacing() const { return x.size() > 1 ? x[1] - x[0] : 0.0; }
};

namespace detail {

inline double psi_unit(double x) {
    const double u = 0.5 * x;
    double s;
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        s = 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    } else {
        s = std::sin(u) / u;
    }
    const double s2 = s * s;
    return 3.0 / (4.0 * pi) * s2 * s2;  // unit mass, spectrum in [-2, 2]
}

}  // namespace detail

// max over admissible grid points of
//   |F| / ( s^{m-1} (|F|^{1/m} * psi_s^{1/m})^m ),
// where psi_s is the nonnegative unit-mass kernel adapted to the dual of
// the band and s is the dual scale.  The s^{m-1} factor is what makes the
// majorant dilation invariant; for m = 1 it disappears and a constant
// signal gives ratio one exactly.  Rejects aliased data (spectral mass
// outside the declared band above 1%).
inline double reproducing_inequality_check(const BandLimited1D& F, int m) {
    if (m < 1) throw std::invalid_argument("reproducing check: m >= 1 required");
    const std::size_t N = F.x.size();
    if (N < 16 || F.values.size() != N)
        throw std::invalid_argument("reproducing check: need >= 16 matched samples");
    const double h = F.spacing();
    if (!(h > 0.0)) throw std::invalid_argument("reproducing check: grid must increase");
    if (!(F.band_width > 0.0)) throw std::invalid_argument("reproducing check: band width > 0");
    // sampling must resolve the band
    if (pi / h < std::abs(F.band_center) + F.band_width)
        throw std::invalid_argument("reproducing check: sampling below Nyquist for the band");

    // spectral-leakage guard via the periodogram
    {
        const double span = h * N;
        double inside = 0.0, total = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            const double xi = 2.0 * pi * (static_cast<double>(j) - 0.5 * N) / span;
            cplx acc = 0.0;
            for (std::size_t k = 0; k < N; ++k) {
                const double ph = -xi * F.x[k];
                acc += F.values[k] * cplx{std::cos(ph), std::sin(ph)};
            }
            const double p = std::norm(acc);
            total += p;
            const double guard = 4.0 * 2.0 * pi / span;
            if (std::abs(xi - F.band_center) <= 0.5 * F.band_width + guard) inside += p;
        }
        if (total > 0.0 && (total - inside) / total > 0.01)
            throw NumericGuardError("reproducing check: spectral leakage above 1%");
    }

    const double s = 0.5 * F.band_width;  // kernel spectrum in [-2s, 2s]
    auto psi = [s](double x) { return s * detail::psi_unit(s * x); };

    // admissible evaluation window: kernel tail below 1e-6 of unit mass
    const double tail_T = 64.0 / s;
    const double x_lo = F.x.front() + tail_T, x_hi = F.x.back() - tail_T;
    if (!(x_lo < x_hi))
        throw std::invalid_argument("reproducing check: domain too short for the kernel support");

    const double dual_prefactor = std::pow(s, m - 1.0);
    double max_ratio = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        if (F.x[i] < x_lo || F.x[i] > x_hi) continue;
        double conv = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            const double a = std::abs(F.values[j]);
            if (a == 0.0) continue;
            conv += std::pow(a, 1.0 / m) * std::pow(psi(F.x[i] - F.x[j]), 1.0 / m) * h;
        }
        const double majorant = dual_prefactor * std::pow(conv, m);
        const double num = std::abs(F.values[i]);
        if (majorant > 0.0) max_ratio = std::max(max_ratio, num / majorant);
        else if (num > 0.0)
            throw NumericGuardError("reproducing check: vanishing majorant under nonzero signal");
    }
    return max_ratio;
}

}  // namespace fdl
