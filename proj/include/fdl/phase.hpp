// Graph phases for the paraboloid and the translated sphere, with the
// parabolic rescaling map applied any finite number of times.
#pragma once

#include <cmath>
#include <vector>

#include "fdl/common.hpp"

namespace fdl {

enum class PhaseKind { paraboloid, sphere };

// phi(xi) = -|xi|^2 (paraboloid) or sqrt(1-|xi|^2) - 1 (sphere), on
// |xi| <= 1/2, possibly composed with rescalings
//   phi -> delta^{-2}( phi(xi0 + delta xi) - delta grad phi(xi0).xi - phi(xi0) ).
// The paraboloid is a fixed point of every such rescaling.
class Phase {
  public:
    explicit Phase(PhaseKind kind, int surface_dim) : kind_(kind), n_(surface_dim) {
        if (surface_dim < 1) throw std::invalid_argument("phase: surface dimension >= 1 required");
    }

    PhaseKind kind() const { return kind_; }
    int surface_dim() const { return n_; }  // xi lives in R^{surface_dim}

    struct Rescale {
        Vec xi0;
        double delta;
        double f0;  // value of the previous phase at xi0
        Vec g0;     // gradient of the previous phase at xi0
    };

    const std::vector<Rescale>& rescalings() const { return records_; }

    double value(const Vec& xi) const { return eval(records_.size(), xi); }

    Vec gradient(const Vec& xi) const { return grad(records_.size(), xi); }

    // Appends one application of the scaling map.  The sphere phase needs
    // |xi0| + delta/2 <= 1/2 so the composed domain stays inside the graph.
    Phase rescaled(const Vec& xi0, double delta) const {
        if (static_cast<int>(xi0.size()) != n_)
            throw std::invalid_argument("phase rescale: xi0 dimension mismatch");
        if (!(delta > 0.0 && delta < 1.0 + 1e-12))
            throw std::invalid_argument("phase rescale: delta in (0,1] required");
        if (kind_ == PhaseKind::sphere && norm(xi0) > 0.5 - 0.5 * delta + 1e-12)
            throw std::invalid_argument("phase rescale: sphere requires |xi0| <= 1/2 - delta/2");
        Phase out(*this);
        Rescale r;
        r.xi0 = xi0;
        r.delta = delta;
        r.f0 = value(xi0);
        r.g0 = gradient(xi0);
        out.records_.push_back(std::move(r));
        return out;
    }

  private:
    void check_domain(const Vec& xi) const {
        if (static_cast<int>(xi.size()) != n_)
            throw std::invalid_argument("phase: xi dimension mismatch");
        if (norm(xi) > 0.5 + 1e-9)
            throw std::invalid_argument("phase: |xi| <= 1/2 required");
    }

    double base_value(const Vec& xi) const {
        const double r2 = norm2(xi);
        if (kind_ == PhaseKind::paraboloid) return -r2;
        return std::sqrt(1.0 - r2) - 1.0;
    }

    Vec base_gradient(const Vec& xi) const {
        Vec g(xi);
        if (kind_ == PhaseKind::paraboloid) {
            for (double& x : g) x *= -2.0;
            return g;
        }
        const double s = std::sqrt(1.0 - norm2(xi));
        for (double& x : g) x *= -1.0 / s;
        return g;
    }

    double eval(std::size_t level, const Vec& xi) const {
        if (level == 0) {
            check_domain(xi);
            return base_value(xi);
        }
        const Rescale& r = records_[level - 1];
        Vec inner(r.xi0);
        for (int i = 0; i < n_; ++i) inner[i] += r.delta * xi[i];
        const double inv2 = 1.0 / (r.delta * r.delta);
        return inv2 * (eval(level - 1, inner) - r.delta * dot(r.g0, xi) - r.f0);
    }

    Vec grad(std::size_t level, const Vec& xi) const {
        if (level == 0) {
            check_domain(xi);
            return base_gradient(xi);
        }
        const Rescale& r = records_[level - 1];
        Vec inner(r.xi0);
        for (int i = 0; i < n_; ++i) inner[i] += r.delta * xi[i];
        Vec g = grad(level - 1, inner);
        for (int i = 0; i < n_; ++i) g[i] = (g[i] - r.g0[i]) / r.delta;
        return g;
    }

    PhaseKind kind_;
    int n_;
    std::vector<Rescale> records_;
};

// Outward graph normal, proportional to (-grad phi, 1) and normalised so
// the last component is positive.
inline Vec normal_at(const Phase& phase, const Vec& xi) {
    const Vec g = phase.gradient(xi);
    Vec nrm(g.size() + 1);
    double s = 1.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        nrm[i] = -g[i];
        s += g[i] * g[i];
    }
    nrm[g.size()] = 1.0;
    const double inv = 1.0 / std::sqrt(s);
    for (double& x : nrm) x *= inv;
    return nrm;
}

inline Phase rescale_phase(const Phase& phase, const Vec& xi0, double delta) {
    return phase.rescaled(xi0, delta);
}

}  // namespace fdl
