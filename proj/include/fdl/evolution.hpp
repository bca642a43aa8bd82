// Truncated Schrodinger / half-wave propagators on frequency lattices,
// wave solutions assembled from data pairs, maximal functions against
// fractal measures and the maximal-inequality scaling experiment.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "fdl/bounds.hpp"
#include "fdl/common.hpp"
#include "fdl/io.hpp"
#include "fdl/measure.hpp"

namespace fdl {

// f_hat sampled on the lattice h Z^n.  `exact_lattice` marks data whose
// definition IS the trig sum (random lattice coefficients): those are
// evaluated exactly at any (x,t) and skip the phase-resolution guard that
// protects continuum-sampling quadrature.
struct FrequencyDatum {
    int n = 0;
    double h = 0;
    std::vector<Vec> nodes;
    std::vector<cplx> values;
    double annulus_inner = 0.0, annulus_outer = 0.0;  // both zero: untagged
    bool exact_lattice = false;

    double l2_norm() const {
        const double hn = std::pow(h, n);
        return std::sqrt(pairwise_sum_d(values.size(), [&](std::size_t i) {
            return std::norm(values[i]) * hn;
        }));
    }

    double max_freq() const {
        double m = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (std::abs(values[i]) > 0.0) m = std::max(m, norm(nodes[i]));
        return m;
    }

    void validate() const {
        if (n < 1 || !(h > 0.0)) throw std::invalid_argument("datum: bad lattice");
        if (nodes.size() != values.size()) throw std::invalid_argument("datum: size mismatch");
        if (annulus_outer > 0.0)
            for (std::size_t i = 0; i < nodes.size(); ++i)
                if (std::abs(values[i]) > 0.0) {
                    const double r = norm(nodes[i]);
                    if (r <= annulus_inner || r >= annulus_outer)
                        throw std::invalid_argument("datum: nonzero value outside tagged annulus");
                }
    }
};

// Gaussian cutoff equal to (2 pi)^{-n/2} at the origin.
inline double propagator_cutoff(int n, double r) {
    return std::pow(2.0 * pi, -0.5 * n) * std::exp(-r * r);
}

// S^{N,m}_t f(x) = int psi(|xi|/N) f_hat(xi) e^{i x.xi + i t |xi|^m} dxi
// by lattice quadrature.
inline cplx truncated_propagator(const FrequencyDatum& f, double m, double t, const Vec& x,
                                 double N) {
    if (!(m >= 1.0)) throw std::invalid_argument("propagator: m >= 1 required");
    if (!(N > 0.0)) throw std::invalid_argument("propagator: N > 0 required");
    if (static_cast<int>(x.size()) != f.n)
        throw std::invalid_argument("propagator: x dimension mismatch");
    if (!f.exact_lattice) {
        const double mf = f.max_freq();
        const double slew = f.h * (norm(x) + m * std::abs(t) * std::pow(mf, m - 1.0));
        if (!(slew < pi))
            throw std::invalid_argument("propagator: lattice does not resolve the phase");
    }
    const double hn = std::pow(f.h, f.n);
    return pairwise_sum<cplx>(0, f.nodes.size(), [&](std::size_t j) {
        const double r = norm(f.nodes[j]);
        const double ph = dot(x, f.nodes[j]) + t * std::pow(r, m);
        const double cut = propagator_cutoff(f.n, r / N);
        return f.values[j] * cut * cplx{std::cos(ph), std::sin(ph)} * hn;
    });
}

// Closed form of the truncated free Schrodinger evolution of the datum
// f_hat(xi) = sigma^n exp(-sigma^2 |xi|^2 / 2), i.e. f(x) = e^{-|x|^2/(2 sigma^2)}.
inline cplx gaussian_propagator_closed_form(int n, double sigma, double t, const Vec& x,
                                            double N) {
    const cplx b{0.5 * sigma * sigma + 1.0 / (N * N), -t};
    const cplx amp = std::pow(2.0 * pi, -0.5 * n) * std::pow(sigma, n) *
                     std::pow(pi / b, 0.5 * n);
    return amp * std::exp(-norm2(x) / (4.0 * b));
}

inline FrequencyDatum gaussian_datum(int n, double sigma, double h, double freq_extent) {
    FrequencyDatum f;
    f.n = n;
    f.h = h;
    const int kmax = static_cast<int>(std::ceil(freq_extent / h));
    std::vector<int> idx(n, -kmax);
    bool done = false;
    while (!done) {
        Vec xi(n);
        for (int i = 0; i < n; ++i) xi[i] = h * idx[i];
        f.values.push_back(std::pow(sigma, n) * std::exp(-0.5 * sigma * sigma * norm2(xi)));
        f.nodes.push_back(std::move(xi));
        done = true;
        for (int i = 0; i < n; ++i) {
            if (++idx[i] <= kmax) {
                done = false;
                break;
            }
            idx[i] = -kmax;
        }
    }
    f.validate();
    return f;
}

// Nodewise Bessel (1+|xi|^2)^{-s/2} or Riesz |xi|^{-s} multiplier.
inline FrequencyDatum bessel_riesz_multiplier(const FrequencyDatum& f, double s,
                                              bool homogeneous) {
    FrequencyDatum out(f);
    for (std::size_t j = 0; j < f.nodes.size(); ++j) {
        const double r2 = norm2(f.nodes[j]);
        if (homogeneous) {
            if (r2 < 1e-24) {
                if (std::abs(f.values[j]) > 0.0)
                    throw std::invalid_argument("riesz multiplier: datum must vanish at the origin");
                out.values[j] = 0.0;
            } else {
                out.values[j] = f.values[j] * std::pow(std::sqrt(r2), -s);
            }
        } else {
            out.values[j] = f.values[j] * std::pow(1.0 + r2, -0.5 * s);
        }
    }
    return out;
}

// v(x,t) = S^{N,1}_t f_+ + S^{N,1}_{-t} f_- with f_± = (v0 ∓ i I_1 * v1)/2.
inline cplx wave_solution(const FrequencyDatum& v0, const FrequencyDatum& v1, double t,
                          const Vec& x, double N) {
    if (v0.n != v1.n || v0.h != v1.h || v0.nodes.size() != v1.nodes.size())
        throw std::invalid_argument("wave: v0/v1 lattices must match");
    const FrequencyDatum i1v1 = bessel_riesz_multiplier(v1, 1.0, true);
    FrequencyDatum fp(v0), fm(v0);
    for (std::size_t j = 0; j < v0.values.size(); ++j) {
        const cplx iv = cplx{0.0, 1.0} * i1v1.values[j];
        fp.values[j] = 0.5 * (v0.values[j] - iv);
        fm.values[j] = 0.5 * (v0.values[j] + iv);
    }
    return truncated_propagator(fp, 1.0, t, x, N) + truncated_propagator(fm, 1.0, -t, x, N);
}

// Grid maximum of the propagator magnitude; a lower bound for the sup.
inline double maximal_function(const FrequencyDatum& f, double m, const Vec& x,
                               const Vec& t_grid, const Vec& N_grid) {
    if (t_grid.empty() || N_grid.empty())
        throw std::invalid_argument("maximal function: grids must be non-empty");
    double best = 0.0;
    for (double N : N_grid)
        for (double t : t_grid)
            best = std::max(best, std::abs(truncated_propagator(f, m, t, x, N)));
    return best;
}

// ---- the scaling experiment ------------------------------------------

struct MaximalScanResult {
    Vec R;
    Vec norms;                 // ||sup_t |S_t f|||_{L2(dmu)}, seed-averaged
    double slope = 0.0;        // from log norm vs log R
    double slope_stderr = 0.0;
    double s0 = 0.0;           // reference exponent
    std::string s0_branch;

    json to_json() const {
        json j;
        j["R"] = R;
        j["norms"] = norms;
        j["slope"] = slope;
        j["slope_stderr"] = slope_stderr;
        j["s0"] = s0;
        j["s0_branch"] = s0_branch;
        return j;
    }

    std::string norms_csv() const {
        CsvWriter w({"R", "norm"});
        for (std::size_t i = 0; i < R.size(); ++i) w.add_row({fmt_g17(R[i]), fmt_g17(norms[i])});
        return w.str();
    }
};

// max{ (n-alpha)/2 + n/(2(n+1)), (n-alpha+1)(1/2 - 1/(4n)) }.
inline std::pair<double, std::string> maximal_reference_exponent(int n, double alpha) {
    const double b1 = 0.5 * (n - alpha) + n / (2.0 * (n + 1.0));
    const double b2 = (n - alpha + 1.0) * (0.5 - 1.0 / (4.0 * n));
    return b1 >= b2 ? std::make_pair(b1, std::string("low-alpha branch"))
                    : std::make_pair(b2, std::string("high-alpha branch"));
}

struct MaximalScanOptions {
    double lattice_h = 0.25;
    int t_grid_start = 256;
    int t_grid_max = 1 << 16;
    double refine_rel_tol = 0.02;  // double the grid until the norm moves less
    double cutoff_N_factor = 2.0;  // N = factor * R
};

// Seeded random annulus datum, supp f_hat in {R/8 < |xi| < R/2}, ||f||_2 = 1.
inline FrequencyDatum random_annulus_datum(int n, double R, double h, std::uint64_t seed) {
    FrequencyDatum f;
    f.n = n;
    f.h = h;
    f.annulus_inner = R / 8.0;
    f.annulus_outer = R / 2.0;
    f.exact_lattice = true;
    Rng rng(seed ^ 0xa5a5a5a5ULL);
    const int kmax = static_cast<int>(std::ceil(R / (2.0 * h)));
    std::vector<int> idx(n, -kmax);
    bool done = false;
    while (!done) {
        Vec xi(n);
        for (int i = 0; i < n; ++i) xi[i] = h * idx[i];
        const double r = norm(xi);
        if (r > f.annulus_inner && r < f.annulus_outer) {
            f.nodes.push_back(xi);
            f.values.push_back(rng.complex_gaussian());
        }
        done = true;
        for (int i = 0; i < n; ++i) {
            if (++idx[i] <= kmax) {
                done = false;
                break;
            }
            idx[i] = -kmax;
        }
    }
    if (f.nodes.empty()) throw std::invalid_argument("annulus datum: empty lattice annulus");
    const double l2 = f.l2_norm();
    for (auto& v : f.values) v /= l2;
    f.validate();
    return f;
}

namespace detail {

// sup over the t grid of |sum_k a_k e^{i t w_k}| via per-mode rotors.
inline double sup_over_t(const std::vector<cplx>& a, const Vec& w, double t_max,
                         std::size_t steps) {
    const double dt = t_max / static_cast<double>(steps);
    std::vector<cplx> rot(a.size()), ph(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        rot[k] = std::polar(1.0, dt * w[k]);
        ph[k] = a[k] * std::polar(1.0, dt * w[k]);  // start at t = dt (t > 0)
    }
    double best = 0.0;
    for (std::size_t s = 0; s < steps; ++s) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) acc += ph[k];
        best = std::max(best, std::abs(acc));
        for (std::size_t k = 0; k < a.size(); ++k) ph[k] *= rot[k];
    }
    return best;
}

}  // namespace detail

// For each R: seeded random annulus data, ||sup_{0<t<1} |S^{N,2}_t f|||_{L2(dmu)}
// averaged over seeds, then the log-log slope against the reference
// exponent.  Data are exact trig polynomials; the t grid is doubled until
// the norm is stable.
inline MaximalScanResult maximal_scaling_fit(int n, const DiscreteMeasure& mu, double alpha,
                                             const Vec& R_list, int seeds,
                                             const MaximalScanOptions& opt = {}) {
    if (R_list.empty()) throw std::invalid_argument("maximal scan: R list must be non-empty");
    if (mu.d != n) throw std::invalid_argument("maximal scan: measure dimension mismatch");
    if (seeds < 1) throw std::invalid_argument("maximal scan: seeds >= 1 required");
    MaximalScanResult res;
    const auto [s0, branch] = maximal_reference_exponent(n, alpha);
    res.s0 = s0;
    res.s0_branch = branch;

    for (double R : R_list) {
        double acc = 0.0;
        for (int seed = 0; seed < seeds; ++seed) {
            const FrequencyDatum f = random_annulus_datum(
                n, R, opt.lattice_h, 0x9000 + 131 * static_cast<std::uint64_t>(seed) + std::llround(R));
            const double N = opt.cutoff_N_factor * R;
            const double hn = std::pow(f.h, f.n);
            // frequency-side coefficients per measure point
            Vec w(f.nodes.size());
            for (std::size_t k = 0; k < f.nodes.size(); ++k) {
                const double r = norm(f.nodes[k]);
                w[k] = r * r;  // m = 2 phase
            }
            Vec sup2(mu.size(), 0.0);
            parallel_for(mu.size(), [&](std::size_t j) {
                std::vector<cplx> a(f.nodes.size());
                for (std::size_t k = 0; k < f.nodes.size(); ++k) {
                    const double r = norm(f.nodes[k]);
                    const double ph = dot(mu.points[j], f.nodes[k]);
                    a[k] = f.values[k] * propagator_cutoff(n, r / N) * hn *
                           cplx{std::cos(ph), std::sin(ph)};
                }
                double prev = -1.0, cur = 0.0;
                for (int steps = opt.t_grid_start; steps <= opt.t_grid_max; steps *= 2) {
                    cur = detail::sup_over_t(a, w, 1.0, static_cast<std::size_t>(steps));
                    if (prev > 0.0 && std::abs(cur - prev) <= opt.refine_rel_tol * cur) break;
                    prev = cur;
                }
                sup2[j] = cur * cur;
            });
            const double norm_sq = pairwise_sum_d(mu.size(), [&](std::size_t j) {
                return mu.weights[j] * sup2[j];
            });
            acc += std::sqrt(norm_sq);
        }
        res.R.push_back(R);
        res.norms.push_back(acc / seeds);
    }

    Vec lx, ly;
    for (std::size_t i = 0; i < res.R.size(); ++i) {
        lx.push_back(std::log(res.R[i]));
        ly.push_back(std::log(res.norms[i]));
    }
    if (lx.size() >= 2) {
        const LineFit fit = fit_line(lx, ly);
        res.slope = fit.slope;
        res.slope_stderr = fit.slope_stderr;
    }
    return res;
}

// ---- polar-coordinate majorization diagnostic -------------------------

struct PolarCheckOptions {
    double m_power = 1.0;  // half-wave
    int t_samples = 12;
    Vec N_grid = {4.0, 16.0, 64.0};
    int shells = 24;
};

// LHS: ||sup_t sup_N |S^{N,m}_t I_s * f|||_{L1(dmu)} on grids.
// RHS: sqrt(c_alpha ||mu||) * int R^{d-1-s} (1+R)^{-beta/2} ||f_hat(R.)||_{L2(S^{d-1})} dR
// by shell binning of the lattice datum.  The pair is a diagnostic for
// the polar-coordinate chain; its constant is not specified.
inline std::pair<double, double> polar_majorization_check(const FrequencyDatum& f, double s,
                                                          const DiscreteMeasure& mu, double alpha,
                                                          double beta,
                                                          const PolarCheckOptions& opt = {}) {
    f.validate();
    const double mf = f.max_freq();
    if (!(mf > 0.0)) throw std::invalid_argument("polar check: datum has no support");
    if (!(beta < beta_lower(mu.d, alpha).value + 1e-12))
        throw std::invalid_argument("polar check: beta must sit below the decay floor");

    const FrequencyDatum fs = bessel_riesz_multiplier(f, s, true);

    Vec t_grid;
    for (int i = 0; i < opt.t_samples; ++i)
        t_grid.push_back((i + 1.0) / opt.t_samples);

    Vec per_point(mu.size());
    parallel_for(mu.size(), [&](std::size_t j) {
        per_point[j] = mu.weights[j] * maximal_function(fs, opt.m_power, mu.points[j], t_grid,
                                                        opt.N_grid);
    });
    const double lhs = pairwise_sum_d(mu.size(), [&](std::size_t j) { return per_point[j]; });

    // shell quadrature of the datum
    const int d = f.n;
    const double dr = mf * 1.0001 / opt.shells;
    const double hn = std::pow(f.h, f.n);
    Vec shell_mass(opt.shells, 0.0);
    for (std::size_t k = 0; k < f.nodes.size(); ++k) {
        const double r = norm(f.nodes[k]);
        const int bin = std::min(opt.shells - 1, static_cast<int>(r / dr));
        shell_mass[bin] += std::norm(f.values[k]) * hn;
    }
    const double mass = mu.total_mass();
    const Vec radii = dyadic_radii(1.0 / 128.0, 2.0);
    const double c_alpha = c_alpha_estimate(mu, alpha, radii).value;
    double rhs = 0.0;
    for (int b = 0; b < opt.shells; ++b) {
        if (shell_mass[b] == 0.0) continue;
        const double R = (b + 0.5) * dr;
        const double shell_l2 = std::sqrt(shell_mass[b] / (dr * std::pow(R, d - 1)));
        rhs += dr * std::pow(R, d - 1.0 - s) * std::pow(1.0 + R, -0.5 * beta) * shell_l2;
    }
    rhs *= std::sqrt(c_alpha * mass);
    return {lhs, rhs};
}

}  // namespace fdl
