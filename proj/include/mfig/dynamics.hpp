#pragma once

#include <optional>

#include "mfig/curvature.hpp"
#include "mfig/gamma.hpp"

namespace mfig {

// Gradient flows of an energy in the mean-weighted transport metric,
//   dp_i/dt = factor * sum_j (dE/dp_j - dE/dp_i) theta_ij = -factor (L(Theta) grad E)_i,
// their dissipation functionals, and the certificates built on them:
//   I(p) = Gamma1(p, grad E)   (Fisher information: dE/dt = -I along factor=1 flow)
//   J(p) = Gamma2(p, grad E)   (its dissipation: d^2E/dt^2 = 2J along factor=1 flow)
// plus the entropy-power series N(t) = exp(-2 E / m) whose concavity in time
// is the discrete entropy-power inequality.

// The two printed flow conventions: the plain transport gradient flow has no
// prefactor; the discrete heat equation carries 1/2. The factor changes
// rates, never signs, of every certified inequality.
enum class FlowConvention { full, half };

inline double flow_factor(FlowConvention c) { return c == FlowConvention::full ? 1.0 : 0.5; }

// I(p) = Gamma1(p, grad E, grad E), one count per edge.
inline double fisher_information(const GammaContext& ctx) { return gamma1(ctx, ctx.grad_e); }

// J(p) = Gamma2(p, grad E, grad E).
inline double information_hessian(const GammaContext& ctx) { return gamma2(ctx, ctx.grad_e); }

// ===== Equilibrium =====
//
// pi = argmin of E over the simplex, by projected gradient descent with
// backtracking. Nothing assumes an interior minimizer: linear energies
// legitimately converge to a vertex. The fixed-point residual
// ||x - proj(x - grad E(x))|| certifies the result.

struct EquilibriumResult {
    Vector pi;
    double energy = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

inline EquilibriumResult equilibrium(const Energy& energy, int n, double tol = 1e-12, int max_iter = 50000) {
    if (n < 1) throw config_error("equilibrium: n must be positive");
    energy.check_size(n, "equilibrium");
    Vector x = uniform_distribution(n);
    double fx = energy.value(x);
    double t = 1.0;
    EquilibriumResult out;
    for (int it = 0; it < max_iter; ++it) {
        const Vector g = energy.gradient(x);
        if (!g.allFinite()) throw numeric_error("equilibrium: gradient diverged at an iterate");
        out.residual = (x - project_simplex(x - g)).lpNorm<Eigen::Infinity>();
        out.iterations = it;
        if (out.residual <= tol) break;
        bool moved = false;
        while (t >= 1e-18) {
            const Vector z = project_simplex(x - t * g);
            const double dz = (z - x).squaredNorm();
            if (dz == 0.0) break;
            const double fz = energy.value(z);
            if (fz <= fx - (1e-4 / t) * dz) {
                x = z;
                fx = fz;
                t = std::min(t * 1.25, 1e6);
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (!moved) break; // line search exhausted; residual already recorded
    }
    out.pi = x;
    out.energy = fx;
    return out;
}

// ===== Flow integration =====

struct FlowOptions {
    FlowConvention convention = FlowConvention::full;
    double boundary_floor = 1e-9; // truncate (with flag) if a coordinate falls below
    // When set, record N(t) = exp(-2 E(t) * entropy_power_rate) alongside E, I, J.
    std::optional<double> entropy_power_rate;
};

struct FlowTrace {
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<double> energy;
    std::vector<double> fisher;       // I(t_k)
    std::vector<double> dissipation;  // J(t_k)
    std::vector<double> entropy_power; // N(t_k); empty unless requested
    double step = 0.0;
    FlowConvention convention = FlowConvention::full;
    bool boundary_stopped = false;
    Vector equilibrium_state;
    double equilibrium_energy = 0.0;
};

namespace detail {

inline Vector flow_rhs(const Graph& g, const Mean& mean, const Energy& energy, const Vector& p, double factor) {
    const Vector grad = energy.gradient(p);
    Vector dp = Vector::Zero(g.n);
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const int i = g.edges[k][0], j = g.edges[k][1];
        const double flux = g.weights[k] * mean.theta(p[i], p[j]) * (grad[j] - grad[i]);
        dp[i] += factor * flux;
        dp[j] -= factor * flux;
    }
    return dp;
}

} // namespace detail

inline FlowTrace gradient_flow(const Graph& g, const Mean& mean, const Energy& energy, Vector p0, double t_end,
                               double step, const FlowOptions& opts = {}) {
    if (!(step > 0.0)) throw config_error("gradient_flow: step must be positive");
    if (!(t_end >= 0.0)) throw config_error("gradient_flow: t_end must be nonnegative");
    if (p0.size() != g.n) throw config_error("gradient_flow: p0 has wrong dimension");
    require_interior(p0, opts.boundary_floor, "gradient_flow");
    energy.check_size(g.n, "gradient_flow");

    const double factor = flow_factor(opts.convention);
    FlowTrace trace;
    trace.step = step;
    trace.convention = opts.convention;
    const auto eq = equilibrium(energy, g.n);
    trace.equilibrium_state = eq.pi;
    trace.equilibrium_energy = eq.energy;

    auto record = [&](double t, const Vector& p) {
        const GammaContext ctx = GammaContext::build(g, mean, energy, p);
        trace.times.push_back(t);
        trace.states.push_back(p);
        const double e = energy.value(p);
        trace.energy.push_back(e);
        trace.fisher.push_back(fisher_information(ctx));
        trace.dissipation.push_back(information_hessian(ctx));
        if (opts.entropy_power_rate) trace.entropy_power.push_back(std::exp(-2.0 * e * *opts.entropy_power_rate));
    };

    record(0.0, p0);
    Vector p = std::move(p0);
    const auto n_steps = static_cast<long>(std::llround(t_end / step));
    for (long s = 0; s < n_steps; ++s) {
        const Vector k1 = detail::flow_rhs(g, mean, energy, p, factor);
        const Vector k2 = detail::flow_rhs(g, mean, energy, p + 0.5 * step * k1, factor);
        const Vector k3 = detail::flow_rhs(g, mean, energy, p + 0.5 * step * k2, factor);
        const Vector k4 = detail::flow_rhs(g, mean, energy, p + step * k3, factor);
        p += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (p.minCoeff() < opts.boundary_floor) {
            trace.boundary_stopped = true;
            break;
        }
        record((s + 1) * step, p);
    }
    return trace;
}

// ===== Heat-equation reduction =====

// Worst deviation, over edges, of theta_ij (dE/dp_i - dE/dp_j) from
// p_i - p_j. Zero exactly when the mean is the heat-compatible mean of the
// energy, in which case the transport gradient flow is the plain graph heat
// equation dp_i/dt = sum_j w_ij (p_j - p_i).
inline double heat_reduction_residual(const Graph& g, const Mean& mean, const Energy& energy, const Vector& p) {
    if (p.size() != g.n) throw config_error("heat_reduction_residual: dimension mismatch");
    const Vector grad = energy.gradient(p);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const int i = g.edges[k][0], j = g.edges[k][1];
        const double lhs = mean.theta(p[i], p[j]) * (grad[i] - grad[j]);
        worst = std::max(worst, std::abs(lhs - (p[i] - p[j])));
    }
    return worst;
}

// The mean theta(s,t) = (s-t)/(U'(s)-U'(t)) that turns the gradient flow of
// an entropy energy E = sum U(p_i) into the heat equation. For the Shannon
// profile this is exactly the logarithmic mean (returned in analytic form);
// other profiles get a finite-difference-differentiated custom mean with the
// diagonal limit 1/U''(s). Nonpositive values (non-convex U) surface as
// numeric_error at evaluation time.
inline Mean heat_compatible_mean(const Energy& energy) {
    if (energy.kind() != Energy::Kind::entropy)
        throw config_error("heat_compatible_mean: energy must be a pure entropy sum");
    if (energy.entropy_kind() == EntropyKind::shannon) return Mean::logarithmic();
    const EntropyProfile profile = energy.profile();
    auto value = [profile](double s, double t) {
        double th;
        if (s == t) {
            const double dd = profile.deriv2(s);
            if (!(dd > 0.0)) throw numeric_error("heat_compatible_mean: U''(s) <= 0 on the diagonal");
            th = 1.0 / dd;
        } else {
            th = (s - t) / (profile.deriv(s) - profile.deriv(t));
        }
        if (!(th >= 0.0)) throw numeric_error("heat_compatible_mean: mean is negative (U not convex)");
        return th;
    };
    return Mean::custom(value);
}

// ===== Certificates =====

// Exponential entropy dissipation along a recorded flow:
//   E(t) - E(pi) <= e^{-2 kappa t} (E(0) - E(pi))   at every grid time,
// and pointwise J(t) >= kappa I(t) (the f = grad E specialization of
// Gamma2 >= kappa Gamma1). kappa = 0 degenerates to "E nonincreasing".
struct DissipationReport {
    double kappa = 0.0;
    double worst_energy_slack = 0.0; // min over t of bound - (E(t) - E_pi)
    double worst_gamma_slack = 0.0;  // min over t of J(t) - kappa I(t)
    bool energy_bound_pass = false;
    bool gamma_bound_pass = false;
    double tol = 0.0;
};

inline DissipationReport dissipation_certificate(const FlowTrace& trace, double kappa, double tol = 1e-9) {
    if (trace.times.empty()) throw config_error("dissipation_certificate: empty trace");
    DissipationReport rep;
    rep.kappa = kappa;
    rep.tol = tol;
    const double gap0 = trace.energy.front() - trace.equilibrium_energy;
    rep.worst_energy_slack = std::numeric_limits<double>::infinity();
    rep.worst_gamma_slack = std::numeric_limits<double>::infinity();
    // The decay rate 2*kappa applies to the full-convention flow; the half
    // flow moves at half speed, so its certified rate halves with it.
    const double rate = 2.0 * kappa * flow_factor(trace.convention);
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        const double bound = std::exp(-rate * trace.times[k]) * gap0;
        rep.worst_energy_slack = std::min(rep.worst_energy_slack,
                                          bound - (trace.energy[k] - trace.equilibrium_energy));
        rep.worst_gamma_slack = std::min(rep.worst_gamma_slack,
                                         trace.dissipation[k] - kappa * trace.fisher[k]);
    }
    rep.energy_bound_pass = rep.worst_energy_slack >= -tol;
    rep.gamma_bound_pass = rep.worst_gamma_slack >= -tol;
    return rep;
}

// Log-Sobolev inequality E(p) - E(pi) <= I(p)/(2 kappa) at quasi-random
// interior points. kappa <= 0 carries no information; such calls pass with
// the degenerate flag set.
struct LogSobolevReport {
    double kappa = 0.0;
    int samples = 0;
    bool degenerate = false;
    double worst_slack = 0.0; // min over samples of I/(2 kappa) - (E - E_pi)
    double worst_ratio = 0.0; // max over samples of 2 kappa (E - E_pi) / I
    bool pass = false;
};

inline LogSobolevReport log_sobolev_check(const Graph& g, const Mean& mean, const Energy& energy, double kappa,
                                          int samples, std::uint64_t seed, double margin = 1e-4,
                                          double tol = 1e-9) {
    if (samples < 1) throw config_error("log_sobolev_check: samples must be positive");
    LogSobolevReport rep;
    rep.kappa = kappa;
    rep.samples = samples;
    if (!(kappa > 0.0)) {
        rep.degenerate = true;
        rep.pass = true;
        return rep;
    }
    const auto eq = equilibrium(energy, g.n);
    Rng rng(seed);
    rep.worst_slack = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        const Vector p = sample_simplex(rng, g.n, margin);
        const GammaContext ctx = GammaContext::build(g, mean, energy, p);
        const double gap = energy.value(p) - eq.energy;
        const double info = fisher_information(ctx);
        rep.worst_slack = std::min(rep.worst_slack, info / (2.0 * kappa) - gap);
        if (info > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, 2.0 * kappa * gap / info);
    }
    rep.pass = rep.worst_slack >= -tol;
    return rep;
}

// ===== Entropy-power concavity =====

// For an entropy energy with convex U and its heat-compatible mean:
//   1/m       = inf over interior p of J(p)/I(p)^2,
//   N(t)      = exp(-2 E(p(t)) / m) along the half-convention heat flow,
// and N must be concave in t. Concavity is checked by second-order central
// differences of the recorded N series.
struct EntropyPowerReport {
    double m_inverse = 0.0;
    Vector argmin;               // minimizer of J/I^2
    bool concavity_pass = false;
    double worst_second_difference = 0.0; // max over interior grid times of d2N (want <= tol)
    double compatibility_residual = 0.0;  // heat-reduction defect at p0
    FlowTrace trace;
};

inline EntropyPowerReport costa_check(const Graph& g, const Energy& energy, const Vector& p0, double t_end,
                                      double step, const GlobalCurvatureOptions& search = {},
                                      double concavity_tol = 1e-7) {
    if (energy.kind() != Energy::Kind::entropy)
        throw config_error("costa_check: energy must be a pure entropy sum");
    const EntropyProfile profile = energy.profile();
    for (double x : {0.02, 0.1, 0.25, 0.5, 0.75, 0.9, 0.98})
        if (!(profile.deriv2(x) > 0.0)) throw config_error("costa_check: U must be convex (U'' > 0 on (0,1))");

    const Mean mean = heat_compatible_mean(energy);
    EntropyPowerReport rep;
    rep.compatibility_residual = heat_reduction_residual(g, mean, energy, p0);

    // 1/m = inf of J/I^2; the ratio diverges at the barycenter (I -> 0 while
    // J/I -> kappa > 0), which the minimizer treats as +infinity.
    auto objective = [&](const Vector& p) {
        const GammaContext ctx = GammaContext::build(g, mean, energy, p);
        const double info = fisher_information(ctx);
        if (!(info > 1e-14)) return std::numeric_limits<double>::infinity();
        return information_hessian(ctx) / (info * info);
    };
    const auto minimum = detail::minimize_on_simplex(objective, g.n, search, search.margin);
    rep.m_inverse = minimum.value;
    rep.argmin = minimum.argmin;

    FlowOptions flow_opts;
    flow_opts.convention = FlowConvention::half;
    flow_opts.entropy_power_rate = rep.m_inverse;
    rep.trace = gradient_flow(g, mean, energy, p0, t_end, step, flow_opts);

    rep.worst_second_difference = -std::numeric_limits<double>::infinity();
    rep.concavity_pass = true;
    const auto& npow = rep.trace.entropy_power;
    for (std::size_t k = 1; k + 1 < npow.size(); ++k) {
        const double d2 = (npow[k + 1] - 2.0 * npow[k] + npow[k - 1]) / (step * step);
        rep.worst_second_difference = std::max(rep.worst_second_difference, d2);
        if (d2 > concavity_tol * std::abs(npow[k])) rep.concavity_pass = false;
    }
    return rep;
}

} // namespace mfig
