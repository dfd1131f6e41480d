#pragma once

#include <sstream>

#include "mfig/gamma.hpp"

namespace mfig {

// Constant-speed geodesics of the mean-weighted transport metric, as the
// coupled system
//   dp_i/dt =  sum_j (f_i - f_j) theta_ij
//   df_i/dt = -1/2 sum_j (f_i - f_j)^2  d theta_ij / d p_i
// integrated with the classical fixed-step order-4 scheme. The speed
// Gamma1(p(t), f(t)) is a conserved quantity; its drift measures integrator
// error and is the module's primary test surface.

struct GeodesicState {
    double t = 0.0;
    Vector p;
    Vector f;
};

struct GeodesicRhs {
    Vector dp;
    Vector df;
};

inline GeodesicRhs geodesic_rhs(const Graph& g, const Mean& mean, const Vector& p, const Vector& f,
                                double boundary = 1e-9) {
    if (p.size() != g.n || f.size() != g.n) throw config_error("geodesic_rhs: dimension mismatch");
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p[i] < boundary) {
            std::ostringstream msg;
            msg << "geodesic_rhs: state within " << boundary << " of the simplex boundary";
            throw boundary_error(msg.str());
        }
    GeodesicRhs rhs;
    rhs.dp = Vector::Zero(g.n);
    rhs.df = Vector::Zero(g.n);
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const int i = g.edges[k][0], j = g.edges[k][1];
        const double w = g.weights[k];
        const double th = w * mean.theta(p[i], p[j]);
        const double d = f[i] - f[j];
        rhs.dp[i] += d * th;
        rhs.dp[j] -= d * th;
        rhs.df[i] -= 0.5 * d * d * w * mean.partial_s(p[i], p[j]);
        rhs.df[j] -= 0.5 * d * d * w * mean.partial_s(p[j], p[i]);
    }
    return rhs;
}

struct GeodesicTrajectory {
    std::vector<GeodesicState> states; // includes the initial state
    bool boundary_stopped = false;     // truncated because some p_i < floor
};

inline GeodesicTrajectory integrate_geodesic(const Graph& g, const Mean& mean, Vector p0, Vector f0, double t_end,
                                             double step, double boundary_floor = 1e-6) {
    if (!(step > 0.0)) throw config_error("integrate_geodesic: step must be positive");
    if (!(t_end >= 0.0)) throw config_error("integrate_geodesic: t_end must be nonnegative");
    if (p0.size() != g.n || f0.size() != g.n) throw config_error("integrate_geodesic: dimension mismatch");
    for (Eigen::Index i = 0; i < p0.size(); ++i)
        if (!(p0[i] >= boundary_floor))
            throw config_error("integrate_geodesic: initial state must satisfy p_i >= boundary floor");

    GeodesicTrajectory traj;
    const auto n_steps = static_cast<long>(std::llround(t_end / step));
    traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
    traj.states.push_back({0.0, p0, f0});

    Vector p = std::move(p0), f = std::move(f0);
    for (long s = 0; s < n_steps; ++s) {
        // A stage state may leave the simplex even when the committed states
        // have not: treat that the same as crossing the floor, not as an
        // error — p and f still hold the last valid state.
        try {
            const auto k1 = geodesic_rhs(g, mean, p, f);
            const auto k2 = geodesic_rhs(g, mean, p + 0.5 * step * k1.dp, f + 0.5 * step * k1.df);
            const auto k3 = geodesic_rhs(g, mean, p + 0.5 * step * k2.dp, f + 0.5 * step * k2.df);
            const auto k4 = geodesic_rhs(g, mean, p + step * k3.dp, f + step * k3.df);
            p += (step / 6.0) * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
            f += (step / 6.0) * (k1.df + 2.0 * k2.df + 2.0 * k3.df + k4.df);
        } catch (const boundary_error&) {
            traj.boundary_stopped = true;
            break;
        }
        if (p.minCoeff() < boundary_floor) {
            traj.boundary_stopped = true;
            break;
        }
        traj.states.push_back({(s + 1) * step, p, f});
    }
    return traj;
}

// Worst relative drift of the conserved speed along a trajectory.
inline double speed_drift(const Graph& g, const Mean& mean, const GeodesicTrajectory& traj) {
    if (traj.states.empty()) throw config_error("speed_drift: empty trajectory");
    const double g0 = gamma1(g, mean, traj.states.front().p, traj.states.front().f);
    if (!(g0 > 0.0)) throw numeric_error("speed_drift: initial speed is not positive");
    double worst = 0.0;
    for (const auto& st : traj.states)
        worst = std::max(worst, std::abs(gamma1(g, mean, st.p, st.f) - g0) / g0);
    return worst;
}

} // namespace mfig
