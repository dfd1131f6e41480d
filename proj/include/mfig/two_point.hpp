#pragma once

#include "mfig/curvature.hpp"
#include "mfig/quadrature.hpp"

namespace mfig {

// Closed-form analytics on the two-vertex graph. States are parametrized by
// the segment x |-> (x, 1-x); everything here reduces to one-dimensional
// calculus on that segment plus quadrature.

struct TwoPointProblem {
    Mean mean;
    Energy energy;

    TwoPointProblem(Mean m, Energy e) : mean(std::move(m)), energy(std::move(e)) {
        energy.check_size(2, "two_point");
    }

    // E restricted to the segment.
    double energy_line(double x) const {
        Vector p(2);
        p << x, 1.0 - x;
        return energy.value(p);
    }
};

// E(x,1-x) = E(1-x,x), required by the distance/bound theorems below.
inline void require_symmetric_energy(const TwoPointProblem& prob, double tol = 1e-12) {
    for (double x : {0.1, 0.23, 0.37, 0.42}) {
        const double diff = std::abs(prob.energy_line(x) - prob.energy_line(1.0 - x));
        if (diff > tol)
            throw config_error("two_point: energy must be symmetric under swapping the two states (|E(x,1-x)-E(1-x,x)| = " +
                               std::to_string(diff) + ")");
    }
}

// Curvature at (x, 1-x):
//   kappa(x) = 1/2 (d theta/d p1 - d theta/d p2)(dE/d p1 - dE/d p2)
//              + theta (E_11 - 2 E_12 + E_22).
// Independent of the eigensolver route in local_curvature; the two must
// agree to rounding.
inline double kappa_k2(const TwoPointProblem& prob, double x, double margin = 1e-12) {
    if (!(x > margin && x < 1.0 - margin)) throw config_error("kappa_k2: x is at or beyond the boundary");
    Vector p(2);
    p << x, 1.0 - x;
    const Vector g = prob.energy.gradient(p);
    const Matrix h = prob.energy.second_partials(p);
    const double ts = prob.mean.partial_s(x, 1.0 - x);
    const double tt = prob.mean.partial_t(x, 1.0 - x);
    const double th = prob.mean.theta(x, 1.0 - x);
    return 0.5 * (ts - tt) * (g[0] - g[1]) + th * (h(0, 0) - 2.0 * h(0, 1) + h(1, 1));
}

// Transport distance between (x1,1-x1) and (x2,1-x2):
//   d = integral_{x1}^{x2} theta(x,1-x)^{-1/2} dx.
// Endpoint singularities (theta vanishing at the boundary) are integrable
// for the arithmetic/logarithmic/spectral/transport-information means; the
// geometric mean's x^{-1/4} blow-up converges too. Genuinely divergent
// integrands surface as divergence_error from the quadrature.
inline double transport_distance(const TwoPointProblem& prob, double x1, double x2,
                                 const QuadratureOptions& quad = {}) {
    if (!(0.0 <= x1 && x1 <= x2 && x2 <= 1.0)) throw config_error("transport_distance: need 0 <= x1 <= x2 <= 1");
    auto integrand = [&](double x) {
        const double th = prob.mean.theta(x, 1.0 - x);
        if (!(th > 0.0)) throw numeric_error("transport_distance: mean is not positive along the segment");
        return 1.0 / std::sqrt(th);
    };
    return integrate_endpoint_refined(integrand, x1, x2, quad);
}

// E(1,0) - E(1/2,1/2): the energy drop the curvature bound is measured
// against. Boundary values use the energy's own boundary conventions
// (0 log 0 = 0 for Shannon terms).
inline double boundary_center_gap(const TwoPointProblem& prob) {
    return prob.energy_line(1.0) - prob.energy_line(0.5);
}

// Upper bound on the global curvature kappa_0 forced by the geometry of the
// segment: kappa_0 <= 8 (E(1,0) - E(1/2,1/2)) / d(0,1)^2.
inline double kappa_min_upper_bound(const TwoPointProblem& prob, const QuadratureOptions& quad = {}) {
    require_symmetric_energy(prob);
    const double gap = boundary_center_gap(prob);
    if (!(gap > 0.0))
        throw config_error("kappa_min_upper_bound: energy must be strictly larger at the boundary than at the center");
    const double d = transport_distance(prob, 0.0, 1.0, quad);
    return 8.0 * gap / (d * d);
}

// Effectiveness: the ratio of the actual global curvature to the geometric
// upper bound, kappa_0 d^2 / (8 (E(1,0) - E(1/2,1/2))). 1 means the bound
// is attained; -infinity is propagated from a diverging kappa_0.
struct Effectiveness {
    double value = 0.0;
    double kappa_min = 0.0;
    double distance = 0.0;
    double gap = 0.0;
    bool diverging = false;
};

inline Effectiveness effectiveness(const TwoPointProblem& prob, const GlobalCurvatureOptions& opts = {},
                                   const QuadratureOptions& quad = {}) {
    require_symmetric_energy(prob);
    Effectiveness out;
    out.gap = boundary_center_gap(prob);
    if (!(out.gap > 0.0))
        throw config_error("effectiveness: energy must be strictly larger at the boundary than at the center");
    out.distance = transport_distance(prob, 0.0, 1.0, quad);
    const GlobalCurvature gc = global_curvature(complete_graph(2), prob.mean, prob.energy, opts);
    out.kappa_min = gc.kappa;
    out.diverging = gc.diverging;
    out.value = gc.diverging ? -std::numeric_limits<double>::infinity()
                             : gc.kappa * out.distance * out.distance / (8.0 * out.gap);
    return out;
}

// Distance in closed form when the mean is the transport-information mean
// with constant c, i.e. curvature identically c: with e(x) = E(x,1-x) and
// e0 = e(1/2),
//   d(x1,x2) = sqrt(2/c) * | sqrt(e(x1)-e0) -+ sqrt(e(x2)-e0) |,
// minus sign when x1,x2 lie on the same side of 1/2, plus when they
// straddle it.
inline double constant_curvature_distance(const TwoPointProblem& prob, double c, double x1, double x2) {
    if (!(c > 0.0)) throw config_error("constant_curvature_distance: constant must be positive");
    if (!(0.0 <= x1 && x1 <= 1.0 && 0.0 <= x2 && x2 <= 1.0))
        throw config_error("constant_curvature_distance: points must lie in [0,1]");
    require_symmetric_energy(prob);
    const double e0 = prob.energy_line(0.5);
    // max guards rounding at x = 1/2 where e - e0 crosses zero.
    const double ra = std::sqrt(std::max(0.0, prob.energy_line(x1) - e0));
    const double rb = std::sqrt(std::max(0.0, prob.energy_line(x2) - e0));
    const bool same_side = (x1 - 0.5) * (x2 - 0.5) >= 0.0;
    return std::sqrt(2.0 / c) * (same_side ? std::abs(ra - rb) : ra + rb);
}

} // namespace mfig
