// Integer points on spheres: exhaustive enumeration of |v|^2 = n2 in Z^d
// with a divisor-sum cross-check for d = 4.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fdl/common.hpp"

namespace fdl {

struct SphereLatticeSet {
    int d = 0;
    std::int64_t n2 = 0;
    std::vector<std::vector<std::int64_t>> vectors;  // lexicographic order

    std::size_t count() const { return vectors.size(); }
};

// All v in Z^d with |v|^2 = n2, by recursive enumeration.  The number of
// visited coordinate prefixes is capped; exceeding the cap throws.
inline SphereLatticeSet sum_of_squares_points(int d, std::int64_t n2,
                                              std::size_t prefix_budget = 1000000) {
    if (d < 1) throw std::invalid_argument("sum_of_squares_points: d >= 1 required");
    if (n2 < 0) throw std::invalid_argument("sum_of_squares_points: n2 >= 0 required");
    SphereLatticeSet set;
    set.d = d;
    set.n2 = n2;
    std::vector<std::int64_t> v(d, 0);
    std::size_t prefixes = 0;
    std::function<void(int, std::int64_t)> rec = [&](int axis, std::int64_t rem) {
        if (++prefixes > prefix_budget)
            throw NumericGuardError("sum_of_squares_points: enumeration budget exceeded");
        if (axis == d - 1) {
            // last coordinate must close the sum exactly
            std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(rem)));
            while (r * r > rem) --r;
            while ((r + 1) * (r + 1) <= rem) ++r;
            if (r * r == rem) {
                if (r == 0) {
                    v[axis] = 0;
                    set.vectors.push_back(v);
                } else {
                    v[axis] = -r;
                    set.vectors.push_back(v);
                    v[axis] = r;
                    set.vectors.push_back(v);
                }
            }
            return;
        }
        std::int64_t lim = static_cast<std::int64_t>(std::sqrt(static_cast<double>(rem)));
        while (lim * lim > rem) --lim;
        while ((lim + 1) * (lim + 1) <= rem) ++lim;
        for (std::int64_t c = -lim; c <= lim; ++c) {
            v[axis] = c;
            rec(axis + 1, rem - c * c);
        }
    };
    rec(0, n2);
    std::sort(set.vectors.begin(), set.vectors.end());
    return set;
}

// r4(N) = 8 * sum of divisors of N not divisible by 4.
inline std::int64_t jacobi_r4(std::int64_t N) {
    if (N <= 0) throw std::invalid_argument("jacobi_r4: N >= 1 required");
    std::int64_t s = 0;
    for (std::int64_t m = 1; m * m <= N; ++m) {
        if (N % m) continue;
        if (m % 4) s += m;
        const std::int64_t q = N / m;
        if (q != m && q % 4) s += q;
    }
    return 8 * s;
}

struct GammaCountRow {
    std::int64_t n = 0;
    std::size_t count = 0;      // #Gamma = #{v in Z^d : |v|^2 = n^2}
    double ratio = 0.0;         // count / (2 pi n)^{d-2}
};

// Counts of lattice directions against the (2 pi n)^{d-2} floor.  The
// floor is a genuine lower bound only along odd n in d = 4 (powers of two
// have r4(n^2) = 24); the full list is reported so callers can see both.
inline std::vector<GammaCountRow> gamma_count_check(int d, const std::vector<std::int64_t>& n_list) {
    if (d < 4) throw std::invalid_argument("gamma_count_check: d >= 4 required");
    std::vector<GammaCountRow> rows;
    rows.reserve(n_list.size());
    for (std::int64_t n : n_list) {
        if (n < 1) throw std::invalid_argument("gamma_count_check: n >= 1 required");
        GammaCountRow row;
        row.n = n;
        row.count = sum_of_squares_points(d, n * n).count();
        row.ratio = static_cast<double>(row.count) / std::pow(2.0 * pi * n, d - 2.0);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace fdl
