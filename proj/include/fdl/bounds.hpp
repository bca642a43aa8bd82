// Closed-form exponent bounds for spherical Fourier decay of fractal
// measures, with the wave/Schrodinger consequences wired up as solvers.
//
// Everything here is plain 64-bit arithmetic; the formula sets are kept
// as explicit piecewise tables so provenance survives into CLI output.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fdl/common.hpp"

namespace fdl {

struct BoundQuery {
    int dim = 0;          // d (decay bounds) or n (propagator bounds)
    double argument = 0;  // alpha or s
    double value = 0;
    std::string provenance;
};

struct BoundPiece {
    double lo, hi;  // closed interval of applicability
    std::string formula_id;
    std::string provenance;
    std::function<double(double)> f;
};

// Interval/formula/provenance triples with a max or min combiner over
// the pieces whose interval contains the argument.  Ties go to the piece
// added last.
class PiecewiseBound {
  public:
    enum class Combine { Max, Min };

    PiecewiseBound(double domain_lo, double domain_hi, Combine c)
        : domain_lo_(domain_lo), domain_hi_(domain_hi), combine_(c) {}

    void add(double lo, double hi, std::string formula_id, std::string provenance,
             std::function<double(double)> f) {
        pieces_.push_back({lo, hi, std::move(formula_id), std::move(provenance), std::move(f)});
    }

    const std::vector<BoundPiece>& pieces() const { return pieces_; }
    double domain_lo() const { return domain_lo_; }
    double domain_hi() const { return domain_hi_; }

    std::pair<double, const BoundPiece*> value_at(double x) const {
        const double tol = 1e-12 * std::max(1.0, std::abs(x));
        const BoundPiece* best = nullptr;
        double val = 0.0;
        for (const auto& p : pieces_) {
            if (x < p.lo - tol || x > p.hi + tol) continue;
            const double v = p.f(x);
            if (!best || (combine_ == Combine::Max ? v >= val : v <= val)) {
                best = &p;
                val = v;
            }
        }
        if (!best) throw std::invalid_argument("piecewise bound: argument outside domain");
        return {val, best};
    }

    std::vector<double> breakpoints() const {
        std::vector<double> b;
        for (const auto& p : pieces_) {
            if (p.lo > domain_lo_ + 1e-14 && p.lo < domain_hi_ - 1e-14) b.push_back(p.lo);
            if (p.hi > domain_lo_ + 1e-14 && p.hi < domain_hi_ - 1e-14) b.push_back(p.hi);
        }
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end(),
                            [](double a, double c) { return std::abs(a - c) < 1e-12; }),
                b.end());
        return b;
    }

    // Combined one-sided values agree at every interior breakpoint.
    double max_breakpoint_jump() const {
        double worst = 0.0;
        for (double b : breakpoints()) {
            const double l = side_value(b, -1), r = side_value(b, +1);
            worst = std::max(worst, std::abs(l - r));
        }
        return worst;
    }

  private:
    double side_value(double b, int side) const {
        const double tol = 1e-12 * std::max(1.0, std::abs(b));
        const BoundPiece* best = nullptr;
        double val = 0.0;
        for (const auto& p : pieces_) {
            const bool covers = side < 0 ? (p.lo < b - tol && b <= p.hi + tol)
                                         : (p.lo - tol <= b && b < p.hi + tol && p.hi > b + tol);
            if (!covers) continue;
            const double v = p.f(b);
            if (!best || (combine_ == Combine::Max ? v >= val : v <= val)) {
                best = &p;
                val = v;
            }
        }
        return best ? val : side_value_any(b);
    }
    double side_value_any(double b) const { return value_at(b).first; }

    double domain_lo_, domain_hi_;
    Combine combine_;
    std::vector<BoundPiece> pieces_;
};

// ---- individual formulas ----------------------------------------------

inline double lower_multilinear_formula(int d, double a) {
    return a - 1.0 + (d - a) * (d - a) / ((d - 1.0) * (2.0 * d - a - 1.0));
}

inline double lower_erdogan_formula(int d, double a) { return a - 1.0 + (d + 2.0 - 2.0 * a) / 4.0; }

inline double upper_knapp_formula(int d, double a) { return a - 1.0 + (d - a) / 2.0; }

inline double upper_sum_of_squares_formula(int d, double a) {
    return a - 1.0 + 2.0 * (d - a) / d;
}

// ---- decay exponent tables ---------------------------------------------

// Sharp two-dimensional table.
inline PiecewiseBound beta2_table() {
    PiecewiseBound t(0.0, 2.0, PiecewiseBound::Combine::Max);
    t.add(0.0, 0.5, "alpha", "mattila table", [](double a) { return a; });
    t.add(0.5, 1.0, "1/2", "wolff table", [](double) { return 0.5; });
    t.add(1.0, 2.0, "alpha/2", "wolff table", [](double a) { return 0.5 * a; });
    return t;
}

// Best known lower bounds: pointwise max of the classical chain and the
// multilinear bound that is valid on all of (0, d].
inline PiecewiseBound beta_lower_table(int d) {
    if (d < 2) throw std::invalid_argument("beta_lower: d >= 2 required");
    if (d == 2) return beta2_table();
    PiecewiseBound t(0.0, d, PiecewiseBound::Combine::Max);
    const double dd = d;
    t.add(0.0, 0.5 * (dd - 1.0), "alpha", "mattila", [](double a) { return a; });
    t.add(0.5 * (dd - 1.0), 0.5 * dd, "(d-1)/2", "plateau",
          [dd](double) { return 0.5 * (dd - 1.0); });
    t.add(0.5 * dd, 0.5 * (dd + 2.0), "alpha-1+(d+2-2alpha)/4", "erdogan",
          [d](double a) { return lower_erdogan_formula(d, a); });
    t.add(0.5 * (dd + 2.0), dd, "alpha-1", "sjolin", [](double a) { return a - 1.0; });
    t.add(0.0, dd, "alpha-1+(d-alpha)^2/((d-1)(2d-alpha-1))", "multilinear",
          [d](double a) { return lower_multilinear_formula(d, a); });
    return t;
}

// Upper bounds from limits of simple measures.  For d = 2 the sharp table
// is returned: the generic cap example is only valid for alpha >= d - 1
// there and would otherwise sit below the known sharp value.
inline PiecewiseBound beta_upper_table(int d) {
    if (d < 2) throw std::invalid_argument("beta_upper: d >= 2 required");
    if (d == 2) {
        PiecewiseBound t(0.0, 2.0, PiecewiseBound::Combine::Min);
        t.add(0.0, 0.5, "alpha", "sharp table", [](double a) { return a; });
        t.add(0.5, 1.0, "1/2", "sharp table", [](double) { return 0.5; });
        t.add(1.0, 2.0, "alpha/2", "sharp table", [](double a) { return 0.5 * a; });
        return t;
    }
    PiecewiseBound t(0.0, d, PiecewiseBound::Combine::Min);
    const double dd = d;
    t.add(0.0, dd - 2.0, "alpha", "trivial", [](double a) { return a; });
    t.add(dd - 2.0, dd, "alpha-1+(d-alpha)/2", "knapp",
          [d](double a) { return upper_knapp_formula(d, a); });
    if (d >= 4)
        t.add(0.0, dd, "alpha-1+2(d-alpha)/d", "sum-of-squares",
              [d](double a) { return upper_sum_of_squares_formula(d, a); });
    return t;
}

inline BoundQuery beta_lower(int d, double alpha) {
    if (!(alpha > 0.0 && alpha <= d + 1e-12))
        throw std::invalid_argument("beta_lower: alpha in (0, d] required");
    const PiecewiseBound table = beta_lower_table(d);
    const auto [v, piece] = table.value_at(alpha);
    return {d, alpha, v, piece->provenance};
}

inline BoundQuery beta_upper(int d, double alpha) {
    if (!(alpha > 0.0 && alpha <= d + 1e-12))
        throw std::invalid_argument("beta_upper: alpha in (0, d] required");
    const PiecewiseBound table = beta_upper_table(d);
    const auto [v, piece] = table.value_at(alpha);
    return {d, alpha, v, piece->provenance};
}

// ---- Schrodinger divergence-set exponent --------------------------------

// Upper bound for the Hausdorff dimension of Schrodinger divergence sets.
// Below the s = 1/2 - 1/(4n) threshold the dimension is full.
inline BoundQuery alpha_upper_schrodinger(int n, double s) {
    if (n < 2) throw std::invalid_argument("alpha_upper_schrodinger: n >= 2 required");
    if (!(s > 0.0 && s <= 0.5 * n + 1e-12))
        throw std::invalid_argument("alpha_upper_schrodinger: s in (0, n/2] required");
    const double nn = n;
    const double s_dk = 0.5 - 1.0 / (4.0 * nn);
    if (s <= s_dk + 1e-15) return {n, s, nn, "dahlberg-kenig regime"};

    const double brk = 1.0 - 3.0 / (2.0 * (nn + 1.0));
    PiecewiseBound t(s_dk, 0.5 * nn, PiecewiseBound::Combine::Min);
    t.add(s_dk, brk, "n+1-(2+2/(2n-1))s", "maximal-branch-1",
          [nn](double x) { return nn + 1.0 - (2.0 + 2.0 / (2.0 * nn - 1.0)) * x; });
    t.add(brk, 0.25 * nn, "n+1-1/(n+1)-2s", "maximal-branch-2",
          [nn](double x) { return nn + 1.0 - 1.0 / (nn + 1.0) - 2.0 * x; });
    t.add(0.25 * nn, 0.5 * nn, "n-2s", "classical", [nn](double x) { return nn - 2.0 * x; });
    auto [v, piece] = t.value_at(s);
    v = std::min(std::max(v, 0.0), nn);
    return {n, s, v, piece->provenance};
}

// ---- floors for the implication solvers ----------------------------------

enum class FloorKind { full, sjolin_only, erdogan_only, multilinear_only };

inline double beta_floor(FloorKind kind, int d, double alpha) {
    switch (kind) {
        case FloorKind::sjolin_only: return alpha - 1.0;
        case FloorKind::erdogan_only: return lower_erdogan_formula(d, alpha);
        case FloorKind::multilinear_only: return lower_multilinear_formula(d, alpha);
        default: return beta_lower(d, alpha).value;
    }
}

// inf{ alpha in (0,d] : floor(d,alpha) > d-2s }, or d when no alpha
// qualifies.  The floors are nondecreasing in alpha, so bisection applies.
inline double gamma_upper_wave(int d, double s, FloorKind floor_kind = FloorKind::full) {
    if (d < 2) throw std::invalid_argument("gamma_upper_wave: d >= 2 required");
    if (!(s > 0.0 && s < 0.5 * d))
        throw std::invalid_argument("gamma_upper_wave: s in (0, d/2) required");
    const double target = d - 2.0 * s;
    auto qualifies = [&](double a) { return beta_floor(floor_kind, d, a) > target; };
    if (!qualifies(d)) return static_cast<double>(d);
    double lo = 1e-9, hi = d;
    if (qualifies(lo)) return lo;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (qualifies(mid) ? hi : lo) = mid;
    }
    return hi;
}

// Smallest alpha with floor(d, alpha) > d - alpha (positive-measure
// distance sets above this dimension); nullopt when there is no crossing.
inline std::optional<double> distance_set_threshold(int d, FloorKind floor_kind = FloorKind::full) {
    if (d < 3) throw std::invalid_argument("distance_set_threshold: d >= 3 required");
    auto qualifies = [&](double a) { return beta_floor(floor_kind, d, a) > d - a; };
    if (!qualifies(d)) return std::nullopt;
    double lo = 1e-9, hi = d;
    if (qualifies(lo)) return lo;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (qualifies(mid) ? hi : lo) = mid;
    }
    return hi;
}

// ---- conjectural / partial m-linear reductions ---------------------------

enum class MlinearVariant { conjectured, partial };

// Lower-bound formulas that the m-linear extension estimates would give.
// m = d is admitted as the extended evaluation at which the conjectured
// variant collapses to the proven multilinear bound.
inline double conjectural_beta_mlinear(int d, double alpha, int m, MlinearVariant variant) {
    if (d < 4) throw std::invalid_argument("mlinear: d >= 4 required");
    if (m < 3 || m > d) throw std::invalid_argument("mlinear: m in [3, d] required");
    if (!(alpha > 0.0 && alpha <= d + 1e-12))
        throw std::invalid_argument("mlinear: alpha in (0, d] required");
    const double dd = d, mm = m;
    if (variant == MlinearVariant::conjectured) {
        const double t1 = alpha - 1.0 + (dd - alpha) * (dd + mm - 2.0 * alpha) /
                                            (2.0 * (mm - 1.0) * (dd + mm - alpha - 1.0));
        const double t2 = alpha - 2.0 * alpha / (dd + mm);
        return std::min(t1, t2);
    }
    const double t1 = alpha - 1.0 +
                      (dd - alpha) * (mm - alpha) / ((mm - 1.0) * (2.0 * mm - alpha - 1.0));
    const double t2 = alpha - alpha / mm;
    return std::min(t1, t2);
}

}  // namespace fdl
