#pragma once

#include "mfig/energy.hpp"
#include "mfig/graph.hpp"
#include "mfig/mean.hpp"

namespace mfig {

// Cached per-state quantities for the Gamma operators at a fixed p.
//
//   theta(i,j)  = w_ij * theta(p_i, p_j)          symmetric
//   dtheta(i,j) = d theta_ij / d p_i              (not symmetric)
//   eta(i,j)    = theta_ij (dE/dp_i - dE/dp_j)    antisymmetric
//   deta(i,j)   = d eta_ij / d p_i
//
// All four vanish identically off edges and on the diagonal, derivatives
// included: a non-edge has no coupling at any p, so its derivatives are zero
// too, not merely its value.
//
// p is any positive vector; the simplex constraint is imposed by callers
// that need it (curvature, flows), not here, so homogeneity statements on
// R_+^n stay testable.
struct GammaContext {
    const Graph* graph = nullptr;
    Vector p;
    Vector grad_e;
    Matrix hess_e;
    Matrix theta, dtheta, eta, deta;

    static GammaContext build(const Graph& g, const Mean& mean, const Energy& energy, const Vector& p) {
        if (p.size() != g.n) throw config_error("gamma: p has wrong dimension");
        for (Eigen::Index i = 0; i < p.size(); ++i)
            if (!(p[i] > 0.0)) throw config_error("gamma: p must be strictly positive");
        energy.check_size(g.n, "gamma");

        GammaContext ctx;
        ctx.graph = &g;
        ctx.p = p;
        ctx.grad_e = energy.gradient(p);
        ctx.hess_e = energy.second_partials(p);
        ctx.theta = Matrix::Zero(g.n, g.n);
        ctx.dtheta = Matrix::Zero(g.n, g.n);
        ctx.eta = Matrix::Zero(g.n, g.n);
        ctx.deta = Matrix::Zero(g.n, g.n);

        for (std::size_t k = 0; k < g.edges.size(); ++k) {
            const int i = g.edges[k][0], j = g.edges[k][1];
            const double w = g.weights[k];
            const double th = w * mean.theta(p[i], p[j]);
            ctx.theta(i, j) = ctx.theta(j, i) = th;
            ctx.dtheta(i, j) = w * mean.partial_s(p[i], p[j]);
            ctx.dtheta(j, i) = w * mean.partial_s(p[j], p[i]);
        }
        for (std::size_t k = 0; k < g.edges.size(); ++k) {
            const int i = g.edges[k][0], j = g.edges[k][1];
            ctx.eta(i, j) = ctx.theta(i, j) * (ctx.grad_e[i] - ctx.grad_e[j]);
            ctx.eta(j, i) = -ctx.eta(i, j);
            ctx.deta(i, j) = ctx.dtheta(i, j) * (ctx.grad_e[i] - ctx.grad_e[j]) +
                             ctx.theta(i, j) * (ctx.hess_e(i, i) - ctx.hess_e(j, i));
            ctx.deta(j, i) = ctx.dtheta(j, i) * (ctx.grad_e[j] - ctx.grad_e[i]) +
                             ctx.theta(j, i) * (ctx.hess_e(j, j) - ctx.hess_e(i, j));
        }
        return ctx;
    }
};

// Gamma1(p, f, f) = sum over unordered pairs of theta_ij (f_i - f_j)^2,
// i.e. the quadratic form f^T L(Theta) f. One count per edge: this is the
// normalization under which Gamma2 below is literally d^2 E/dt^2 along
// geodesics and the dissipation identities hold without stray factors.
inline double gamma1(const GammaContext& ctx, const Vector& f) {
    double s = 0.0;
    const Graph& g = *ctx.graph;
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const int i = g.edges[k][0], j = g.edges[k][1];
        const double d = f[i] - f[j];
        s += ctx.theta(i, j) * d * d;
    }
    return s;
}

// Gamma1 without an energy in sight: the metric form only needs the graph,
// the mean, and the state.
inline double gamma1(const Graph& g, const Mean& mean, const Vector& p, const Vector& f) {
    if (p.size() != g.n || f.size() != g.n) throw config_error("gamma1: dimension mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const int i = g.edges[k][0], j = g.edges[k][1];
        const double d = f[i] - f[j];
        s += g.weights[k] * mean.theta(p[i], p[j]) * d * d;
    }
    return s;
}

// The three equivalent triple-sum expressions for Gamma2, plus the variant
// of the mixed form that appears in the derivation with indices j and k
// exchanged in its second term. f2_statement agrees with f1/f3 identically;
// f2_derivation does not (kept so the discrepancy stays measurable).
enum class Gamma2Formula { f1, f2_statement, f2_derivation, f3 };

inline double gamma2(const GammaContext& ctx, const Vector& f, Gamma2Formula formula = Gamma2Formula::f3) {
    const int n = ctx.graph->n;
    const Matrix& th = ctx.theta;
    const Matrix& dth = ctx.dtheta;
    const Matrix& et = ctx.eta;
    const Matrix& det = ctx.deta;
    double s = 0.0;
    switch (formula) {
        case Gamma2Formula::f1:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double fij = f[i] - f[j];
                    for (int k = 0; k < n; ++k)
                        s += 0.5 * fij * fij * dth(i, j) * et(k, i) +
                             fij * (f[i] - f[k]) * det(i, j) * th(k, i);
                }
            return s;
        case Gamma2Formula::f2_statement:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double fij = f[i] - f[j];
                    for (int k = 0; k < n; ++k)
                        s += fij * (f[i] - f[k]) *
                             (0.5 * dth(i, j) * et(k, i) + 0.5 * dth(k, i) * et(j, k) + det(i, j) * th(k, i));
                }
            return s;
        case Gamma2Formula::f2_derivation:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double fij = f[i] - f[j];
                    for (int k = 0; k < n; ++k)
                        s += fij * (f[i] - f[k]) *
                             (0.5 * dth(i, j) * et(k, i) + 0.5 * dth(j, k) * et(i, j) + det(i, j) * th(k, i));
                }
            return s;
        case Gamma2Formula::f3:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double fij2 = (f[i] - f[j]) * (f[i] - f[j]);
                    if (fij2 == 0.0) continue;
                    for (int k = 0; k < n; ++k)
                        s += 0.5 * fij2 *
                             (dth(i, j) * et(k, i) + det(i, j) * th(k, i) + det(j, k) * th(i, j) -
                              det(k, i) * th(j, k));
                }
            return s;
    }
    return s;
}

// Coefficient matrix A with Gamma2(p,f,f) = f^T L(A) f. Row i<j is the
// half-sum over k of the eight terms below; assembled once and mirrored so
// A is symmetric to the bit. A couples two-hop pairs as well as edges, so
// its sparsity pattern is strictly larger than the adjacency pattern.
inline Matrix gamma2_matrix(const GammaContext& ctx) {
    const int n = ctx.graph->n;
    const Matrix& th = ctx.theta;
    const Matrix& dth = ctx.dtheta;
    const Matrix& et = ctx.eta;
    const Matrix& det = ctx.deta;
    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                s += dth(i, j) * et(k, i)    // d theta_ij/d p_i * eta_ki
                     + det(i, j) * th(k, i)  // d eta_ij/d p_i * theta_ki
                     + det(j, k) * th(i, j)  // d eta_jk/d p_j * theta_ij
                     - det(k, i) * th(j, k)  // d eta_ki/d p_k * theta_jk
                     + dth(j, i) * et(k, j)  // mirror terms: i<->j images of the first four
                     + det(j, i) * th(k, j)  //
                     + det(i, k) * th(j, i)  //
                     - det(k, j) * th(i, k); //
            }
            a(i, j) = a(j, i) = 0.5 * s;
        }
    return a;
}

inline double gamma2_quadratic_form(const Matrix& a, const Vector& f) {
    return f.dot(laplacian_unchecked(a) * f);
}

// Triple sum restricted to a vertex subset: only terms whose theta/eta
// factors are supported inside the subset survive, which for an induced
// subset is exactly the Gamma2 of the induced subgraph evaluated with the
// full-graph gradient data. The product decomposition bookkeeping and the
// single-edge Gamma2 both run through this.
inline double gamma2_restricted(const GammaContext& ctx, const std::vector<int>& vertices, const Vector& f) {
    const Matrix& th = ctx.theta;
    const Matrix& dth = ctx.dtheta;
    const Matrix& et = ctx.eta;
    const Matrix& det = ctx.deta;
    double s = 0.0;
    for (int i : vertices)
        for (int j : vertices) {
            const double fij2 = (f[i] - f[j]) * (f[i] - f[j]);
            for (int k : vertices)
                s += 0.5 * fij2 *
                     (dth(i, j) * et(k, i) + det(i, j) * th(k, i) + det(j, k) * th(i, j) - det(k, i) * th(j, k));
        }
    return s;
}

// Single-edge Gamma2 in closed form:
//   (f_i-f_j)^2 [ -1/2 (d theta_ij/d p_i - d theta_ij/d p_j) eta_ij
//                 + (d eta_ij/d p_i - d eta_ij/d p_j) theta_ij ].
// On a two-vertex graph this is the whole Gamma2.
inline double gamma2_edge(const GammaContext& ctx, int i, int j, const Vector& f) {
    if (!ctx.graph->adjacent(i, j)) throw config_error("gamma2_edge: (i,j) is not an edge");
    const double dtheta_diff = ctx.dtheta(i, j) - ctx.dtheta(j, i);
    // d eta_ij / d p_j = -d eta_ji / d p_j
    const double deta_diff = ctx.deta(i, j) + ctx.deta(j, i);
    const double d = f[i] - f[j];
    return d * d * (-0.5 * dtheta_diff * ctx.eta(i, j) + deta_diff * ctx.theta(i, j));
}

// ===== Summation identities =====
//
// The index conversions the Gamma2 rewrites rest on, checked on dense random
// tensors:
//   (A)  sum b_ijk (x_i-x_j)^2           = sum (b_ijk + b_kij)(x_i-x_j)(x_i-x_k)
//   (B)  sum b_ijk (x_i-x_j)(x_i-x_k)    = 1/2 sum (b_ijk + b_jki - b_kij)(x_i-x_j)^2
// and for matrices (a symmetric, b antisymmetric):
//   (C)  sum a_ij x_i = 1/2 sum a_ij (x_i + x_j)
//   (D)  sum b_ij x_i = 1/2 sum b_ij (x_i - x_j)

struct TensorIdentityReport {
    double pair_to_triple_residual = 0.0;
    double triple_to_pair_residual = 0.0;
    double symmetry_residual = 0.0;
    double antisymmetry_residual = 0.0;
};

inline TensorIdentityReport tensor_identity_check(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> b(static_cast<std::size_t>(n) * n * n);
    for (auto& v : b) v = rng.uniform(-1.0, 1.0);
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 1.0);
    auto at = [&](int i, int j, int k) { return b[(static_cast<std::size_t>(i) * n + j) * n + k]; };

    double lhs_a = 0.0, rhs_a = 0.0, lhs_b = 0.0, rhs_b = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double dij = x[i] - x[j], dik = x[i] - x[k];
                lhs_a += at(i, j, k) * dij * dij;
                rhs_a += (at(i, j, k) + at(k, i, j)) * dij * dik;
                lhs_b += at(i, j, k) * dij * dik;
                rhs_b += 0.5 * (at(i, j, k) + at(j, k, i) - at(k, i, j)) * dij * dij;
            }

    Matrix sym(n, n), antisym(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double u = rng.uniform(-1.0, 1.0), v = rng.uniform(-1.0, 1.0);
            sym(i, j) = sym(j, i) = u;
            antisym(i, j) = i == j ? 0.0 : v;
            antisym(j, i) = -antisym(i, j);
        }
    double lhs_c = 0.0, rhs_c = 0.0, lhs_d = 0.0, rhs_d = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            lhs_c += sym(i, j) * x[i];
            rhs_c += 0.5 * sym(i, j) * (x[i] + x[j]);
            lhs_d += antisym(i, j) * x[i];
            rhs_d += 0.5 * antisym(i, j) * (x[i] - x[j]);
        }

    TensorIdentityReport rep;
    const double scale_a = std::max({1.0, std::abs(lhs_a), std::abs(rhs_a)});
    const double scale_b = std::max({1.0, std::abs(lhs_b), std::abs(rhs_b)});
    rep.pair_to_triple_residual = std::abs(lhs_a - rhs_a) / scale_a;
    rep.triple_to_pair_residual = std::abs(lhs_b - rhs_b) / scale_b;
    rep.symmetry_residual = std::abs(lhs_c - rhs_c) / std::max({1.0, std::abs(lhs_c), std::abs(rhs_c)});
    rep.antisymmetry_residual = std::abs(lhs_d - rhs_d) / std::max({1.0, std::abs(lhs_d), std::abs(rhs_d)});
    return rep;
}

} // namespace mfig
