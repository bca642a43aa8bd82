// Caps on graph surfaces, transversality constants, dual cuboids with
// their mollifiers, scale ladders and the extension-operator quadrature.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "fdl/common.hpp"
#include "fdl/phase.hpp"

namespace fdl {

namespace detail {

// Determinant by Gaussian elimination with partial pivoting; matrices
// here are at most 7x7.
inline double det_small(std::vector<Vec> a) {
    const std::size_t n = a.size();
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) < 1e-300) return 0.0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

}  // namespace detail

// A cap tau = {(xi, phi(xi)) : xi in Q} over the cube Q of side `side`
// centred at `center` (frequency variables live in R^{d-1}).
struct Cap {
    Phase phase;
    Vec center;
    double side = 1.0;

    Cap(Phase ph, Vec c, double s) : phase(std::move(ph)), center(std::move(c)), side(s) {
        if (static_cast<int>(center.size()) != phase.surface_dim())
            throw std::invalid_argument("cap: centre dimension mismatch");
        if (!(side > 0.0 && side <= 1.0)) throw std::invalid_argument("cap: side in (0,1] required");
        // Q must stay inside the phase domain |xi| <= 1/2
        Vec far(center);
        for (double& x : far) x += (x >= 0.0 ? 0.5 * side : -0.5 * side);
        if (norm(far) > 0.5 + 1e-9)
            throw std::invalid_argument("cap: cube leaves the domain |xi| <= 1/2");
    }

    int ambient_dim() const { return phase.surface_dim() + 1; }

    std::vector<Vec> corners() const {
        const int n = phase.surface_dim();
        std::vector<Vec> out;
        out.reserve(1u << n);
        for (std::size_t mask = 0; mask < (1u << n); ++mask) {
            Vec p(center);
            for (int i = 0; i < n; ++i) p[i] += (mask >> i & 1u) ? 0.5 * side : -0.5 * side;
            out.push_back(std::move(p));
        }
        return out;
    }

    // corners, centre, and a per-axis refinement when extra > 0
    std::vector<Vec> sample_points(int per_axis = 2) const {
        const int n = phase.surface_dim();
        const int q = std::max(per_axis, 2);
        std::vector<Vec> out;
        std::vector<int> idx(n, 0);
        const std::size_t total = static_cast<std::size_t>(std::pow(q, n));
        for (std::size_t t = 0; t < total; ++t) {
            Vec p(center);
            for (int i = 0; i < n; ++i) p[i] += -0.5 * side + side * idx[i] / (q - 1.0);
            out.push_back(std::move(p));
            for (int i = 0; i < n; ++i) {
                if (++idx[i] < q) break;
                idx[i] = 0;
            }
        }
        out.push_back(center);
        return out;
    }

    Vec central_normal() const { return normal_at(phase, center); }
};

// Children of side `side/k` tiling Q exactly, k = round(K) >= 1.  The
// rounded divisor is returned through `k_used` when requested.
inline std::vector<Cap> cap_partition(const Cap& cap, double K, int* k_used = nullptr) {
    if (!(K > 1.0)) throw std::invalid_argument("cap partition: K > 1 required");
    const int k = std::max<int>(1, static_cast<int>(std::llround(K)));
    if (k_used) *k_used = k;
    const int n = cap.phase.surface_dim();
    const double child = cap.side / k;
    std::vector<Cap> out;
    std::vector<int> idx(n, 0);
    const std::size_t total = static_cast<std::size_t>(std::pow(k, n));
    for (std::size_t t = 0; t < total; ++t) {
        Vec c(cap.center);
        for (int i = 0; i < n; ++i) c[i] += -0.5 * cap.side + child * (idx[i] + 0.5);
        out.emplace_back(cap.phase, std::move(c), child);
        for (int i = 0; i < n; ++i) {
            if (++idx[i] < k) break;
            idx[i] = 0;
        }
    }
    return out;
}

// Minimal wedge |Y(xi_1) ^ ... ^ Y(xi_m)| over sampled tuples, computed
// as sqrt(det Gram).  Samples are cube corners and centres; normals vary
// monotonically across a cap so extrema sit near corners.
inline double transversality_constant(const std::vector<Cap>& caps, int samples_per_cap = 1) {
    const std::size_t m = caps.size();
    if (m < 2 || m > static_cast<std::size_t>(caps.front().ambient_dim()))
        throw std::invalid_argument("transversality: need 2 <= m <= d caps");
    int per_axis = 2;
    const int n = caps.front().phase.surface_dim();
    while (std::pow(per_axis + 1, n) <= samples_per_cap) ++per_axis;

    std::vector<std::vector<Vec>> normals(m);
    for (std::size_t k = 0; k < m; ++k)
        for (const auto& p : caps[k].sample_points(per_axis))
            normals[k].push_back(normal_at(caps[k].phase, p));

    double best = -1.0;
    std::vector<std::size_t> idx(m, 0);
    bool done = false;
    while (!done) {
        std::vector<Vec> gram(m, Vec(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                gram[i][j] = dot(normals[i][idx[i]], normals[j][idx[j]]);
        const double g = detail::det_small(gram);
        const double wedge = g > 0.0 ? std::sqrt(g) : 0.0;
        if (best < 0.0 || wedge < best) best = wedge;
        done = true;
        for (std::size_t k = 0; k < m; ++k) {
            if (++idx[k] < normals[k].size()) {
                done = false;
                break;
            }
            idx[k] = 0;
        }
    }
    return best;
}

// The dual cuboid tau': dimensions delta^{-1} x ... x delta^{-1} x
// delta^{-2}, long axis along the cap's central normal.  `rotation` maps
// the normal to the last coordinate axis and has determinant +1.
struct DualCuboid {
    double side = 0;            // parent cap side delta
    Vec normal;                 // Y_tau
    Vec dims;                   // d entries
    std::vector<Vec> rotation;  // rows: Lambda_tau, Lambda_tau(Y_tau) = e_d

    Vec to_frame(const Vec& xt) const {
        Vec out(rotation.size());
        for (std::size_t r = 0; r < rotation.size(); ++r) out[r] = dot(rotation[r], xt);
        return out;
    }

    Vec from_frame(const Vec& yp) const {
        Vec out(rotation.size(), 0.0);
        for (std::size_t r = 0; r < rotation.size(); ++r)
            for (std::size_t c = 0; c < rotation.size(); ++c) out[c] += rotation[r][c] * yp[r];
        return out;
    }
};

inline DualCuboid dual_cuboid(const Cap& cap) {
    const int d = cap.ambient_dim();
    DualCuboid dc;
    dc.side = cap.side;
    dc.normal = cap.central_normal();
    dc.dims.assign(d, 1.0 / cap.side);
    dc.dims[d - 1] = 1.0 / (cap.side * cap.side);

    // Orthonormal frame with Y_tau last, then rows so that Lambda Y = e_d.
    std::vector<Vec> basis;
    for (int i = 0; i < d && static_cast<int>(basis.size()) < d - 1; ++i) {
        Vec e(d, 0.0);
        e[i] = 1.0;
        double c = dot(e, dc.normal);
        for (int k = 0; k < d; ++k) e[k] -= c * dc.normal[k];
        for (const auto& b : basis) {
            c = dot(e, b);
            for (int k = 0; k < d; ++k) e[k] -= c * b[k];
        }
        const double en = norm(e);
        if (en > 1e-8) {
            for (double& x : e) x /= en;
            basis.push_back(std::move(e));
        }
    }
    basis.push_back(dc.normal);
    if (detail::det_small(basis) < 0.0)
        for (double& x : basis[0]) x = -x;
    dc.rotation = std::move(basis);
    return dc;
}

// Unit-mass mollifier adapted to the K-fattened dual cuboid:
//   zeta_{K tau'}(x,t) = C (1 + |delta x'/K|^2 + |delta^2 t'/K|^2)^{-c_eps},
// (x',t') in the rotated frame, C fixed so the integral is one.
inline double mollifier_zeta(const DualCuboid& dual, double K, double c_eps, const Vec& xt) {
    const int d = static_cast<int>(dual.rotation.size());
    if (!(K >= 1.0)) throw std::invalid_argument("mollifier: K >= 1 required");
    if (!(c_eps >= 1.0)) throw std::invalid_argument("mollifier: c_eps >= 1 required");
    if (!(c_eps > 0.5 * d))
        throw std::invalid_argument("mollifier: c_eps > d/2 required for unit mass");
    const Vec f = dual.to_frame(xt);
    const double delta = dual.side;
    double q = 1.0;
    for (int i = 0; i < d - 1; ++i) {
        const double y = delta * f[i] / K;
        q += y * y;
    }
    const double yt = delta * delta * f[d - 1] / K;
    q += yt * yt;
    // mass of (1+|y|^2)^{-c} over R^d
    const double zmass =
        std::pow(pi, 0.5 * d) * std::tgamma(c_eps - 0.5 * d) / std::tgamma(c_eps);
    const double norm_c = std::pow(delta, d + 1) / (std::pow(K, d) * zmass);
    return norm_c * std::pow(q, -c_eps);
}

// ---- scale ladder ---------------------------------------------------------

// K_2 < ... < K_{d+1} with the multilinear-constant model c(t) = t^{-2d}.
// Rule-built ladders use K_m = R^{eps^{2(d+2-m)}}; the regime where every
// chain link holds needs R beyond floating-point range, so links are
// evaluated and reported rather than assumed.  Explicit scales support
// desk-size diagnostics.
struct ScaleLadder {
    double R = 0;
    double eps = 0;
    int d = 0;
    Vec K;                       // K[m-2] is K_m, m = 2..d+1
    std::vector<bool> chain_ok;  // K_m^{8m} c(K_m^{-m}) <= K_{m+1}^eps

    double constant_model(double theta) const { return std::pow(theta, -2.0 * d); }

    double K_at(int m) const {
        if (m < 2 || m > d + 1) throw std::invalid_argument("ladder: m in [2, d+1]");
        return K[m - 2];
    }
};

namespace detail {

inline void fill_chain_report(ScaleLadder& lad) {
    lad.chain_ok.clear();
    for (int m = 2; m <= lad.d; ++m) {
        const double lhs = std::pow(lad.K_at(m), 8.0 * m) *
                           lad.constant_model(std::pow(lad.K_at(m), -static_cast<double>(m)));
        const double rhs = std::pow(lad.K_at(m + 1), lad.eps);
        lad.chain_ok.push_back(lhs <= rhs);
    }
}

}  // namespace detail

inline ScaleLadder build_scale_ladder(double R, double eps, int d) {
    if (!(R > 1.0)) throw std::invalid_argument("ladder: R > 1 required");
    if (d < 2) throw std::invalid_argument("ladder: d >= 2 required");
    if (!(eps > 0.0 && eps < 1.0 / (4.0 * d)))
        throw std::invalid_argument("ladder: eps in (0, 1/(4d)) required");
    ScaleLadder lad;
    lad.R = R;
    lad.eps = eps;
    lad.d = d;
    for (int m = 2; m <= d + 1; ++m)
        lad.K.push_back(std::pow(R, std::pow(eps, 2.0 * (d + 2 - m))));
    detail::fill_chain_report(lad);
    return lad;
}

inline ScaleLadder scale_ladder_from_scales(double R, double eps, int d, const Vec& Ks) {
    if (static_cast<int>(Ks.size()) != d) throw std::invalid_argument("ladder: need d scales");
    for (std::size_t i = 0; i + 1 < Ks.size(); ++i)
        if (!(Ks[i] < Ks[i + 1])) throw std::invalid_argument("ladder: scales must increase");
    if (!(Ks.front() > 1.0)) throw std::invalid_argument("ladder: scales must exceed 1");
    ScaleLadder lad;
    lad.R = R;
    lad.eps = eps;
    lad.d = d;
    lad.K = Ks;
    detail::fill_chain_report(lad);
    return lad;
}

// ---- selection against a subspace ----------------------------------------

inline double dist_to_span(const Vec& y, const std::vector<Vec>& basis) {
    Vec res(y);
    for (const auto& b : basis) {
        const double c = dot(res, b);
        for (std::size_t k = 0; k < res.size(); ++k) res[k] -= c * b[k];
    }
    return norm(res);
}

// Children whose normal approaches the span of `basis` within
// (parent side)/K_next at some sampled xi.
inline std::vector<Cap> v_set_select(const Cap& parent, const std::vector<Cap>& children,
                                     const std::vector<Vec>& basis, double K_next) {
    if (!(K_next > 1.0)) throw std::invalid_argument("v_set_select: K_next > 1 required");
    const double tolerance = parent.side / K_next;
    std::vector<Cap> out;
    for (const auto& child : children) {
        double best = 1e300;
        for (const auto& p : child.sample_points(2))
            best = std::min(best, dist_to_span(normal_at(child.phase, p), basis));
        if (best <= tolerance) out.push_back(child);
    }
    return out;
}

// ---- extension operator ---------------------------------------------------

// Tensor-midpoint samples of g over a cap's cube.
struct GridFunction {
    int nodes_per_axis = 0;
    std::vector<Vec> nodes;
    std::vector<cplx> values;
    double cell_volume = 0;

    double l2_norm() const {
        const double s = pairwise_sum_d(values.size(), [&](std::size_t i) {
            return std::norm(values[i]) * cell_volume;
        });
        return std::sqrt(s);
    }
};

inline GridFunction sample_on_cap(const Cap& cap, int nodes_per_axis,
                                  const std::function<cplx(const Vec&)>& g) {
    if (nodes_per_axis < 2)
        throw std::invalid_argument("grid function: at least two nodes per axis");
    const int n = cap.phase.surface_dim();
    GridFunction gf;
    gf.nodes_per_axis = nodes_per_axis;
    const double h = cap.side / nodes_per_axis;
    gf.cell_volume = std::pow(h, n);
    std::vector<int> idx(n, 0);
    const std::size_t total = static_cast<std::size_t>(std::pow(nodes_per_axis, n));
    for (std::size_t t = 0; t < total; ++t) {
        Vec p(cap.center);
        for (int i = 0; i < n; ++i) p[i] += -0.5 * cap.side + h * (idx[i] + 0.5);
        gf.values.push_back(g(p));
        gf.nodes.push_back(std::move(p));
        for (int i = 0; i < n; ++i) {
            if (++idx[i] < nodes_per_axis) break;
            idx[i] = 0;
        }
    }
    return gf;
}

// T_tau g(x,t) = int_Q g(xi) e^{i x.xi + i t phi(xi)} dxi by the midpoint
// rule on the sampled grid.
inline cplx extension_operator(const Cap& cap, const GridFunction& g, const Vec& x, double t) {
    if (g.nodes.empty()) throw std::invalid_argument("extension: empty grid");
    if (x.size() != static_cast<std::size_t>(cap.phase.surface_dim()))
        throw std::invalid_argument("extension: x dimension mismatch");
    return pairwise_sum<cplx>(0, g.nodes.size(), [&](std::size_t j) {
        const double ph = dot(x, g.nodes[j]) + t * cap.phase.value(g.nodes[j]);
        return g.values[j] * cplx{std::cos(ph), std::sin(ph)} * g.cell_volume;
    });
}

}  // namespace fdl
