// Shared numeric utilities: deterministic reductions, seeded RNG,
// geometric constants and a small thread pool honouring FDL_THREADS.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fdl {

using Vec = std::vector<double>;
using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Raised when a computation hits a numeric guard (underflow, degenerate
// data) as opposed to an argument-validation failure.
struct NumericGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline double dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline Vec scaled(const Vec& a, double c) {
    Vec r(a);
    for (double& x : r) x *= c;
    return r;
}

// Volume of the d-dimensional unit ball.
inline double unit_ball_volume(int d) {
    return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

// Surface area of the unit sphere S^{d-1} in R^d.
inline double sphere_surface_area(int d) {
    return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

// Pairwise (cascade) summation.  Used for every reduction that may run
// under a parallel split so totals do not depend on the worker count.
template <typename T, typename F>
T pairwise_sum(std::size_t lo, std::size_t hi, F&& term) {
    if (hi <= lo) return T{};
    if (hi - lo <= 16) {
        T s = term(lo);
        for (std::size_t i = lo + 1; i < hi; ++i) s += term(i);
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum<T>(lo, mid, term) + pairwise_sum<T>(mid, hi, term);
}

template <typename F>
double pairwise_sum_d(std::size_t n, F&& term) {
    return pairwise_sum<double>(0, n, term);
}

inline int max_threads() {
    if (const char* env = std::getenv("FDL_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Splits [0,n) into contiguous chunks, one per worker.  The chunk
// boundaries depend only on n and the worker count, and callers are
// expected to combine partial results with pairwise_sum so the final
// value is identical for any FDL_THREADS.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
    const int nt = std::min<std::size_t>(max_threads(), n ? n : 1);
    if (nt <= 1 || n < 128) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    const std::size_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Deterministic 64-bit generator (splitmix64).  std:: distributions are
// implementation-defined, so uniforms and gaussians are derived by hand
// to keep outputs byte-identical across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Box-Muller; caches the second value.
    double gaussian() {
        if (have_cache_) {
            have_cache_ = false;
            return cache_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        cache_ = r * std::sin(2.0 * pi * u2);
        have_cache_ = true;
        return r * std::cos(2.0 * pi * u2);
    }

    cplx complex_gaussian() {
        const double re = gaussian(), im = gaussian();
        return {re, im};
    }

    Vec gaussian_vec(int d) {
        Vec v(d);
        for (double& x : v) x = gaussian();
        return v;
    }

  private:
    std::uint64_t state_;
    bool have_cache_ = false;
    double cache_ = 0.0;
};

// Ordinary least squares of y against x.  Returns {slope, intercept,
// slope standard error, residual L2 norm}.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double residual_norm = 0.0;
};

inline LineFit fit_line(const Vec& x, const Vec& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n)
        throw std::invalid_argument("fit_line: need at least two matching points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.residual_norm = std::sqrt(ss);
    f.slope_stderr = n > 2 ? std::sqrt(ss / ((n - 2) * sxx)) : 0.0;
    return f;
}

}  // namespace fdl
