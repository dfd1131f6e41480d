#pragma once

#include <Eigen/Eigenvalues>

#include "mfig/gamma.hpp"

namespace mfig {

// ===== Local curvature =====
//
// kappa(p) = min over non-constant f of Gamma2(p,f,f) / Gamma1(p,f,f),
// computed as the smallest generalized eigenvalue of
//     L(A) alpha = kappa L(Theta) alpha
// on the orthogonal complement of the constants (both forms vanish on
// constants, and L(Theta) is positive definite there for a connected graph
// at an interior point).

namespace detail {

// Orthonormal basis of the complement of span(1): columns 2..n of the
// Householder reflection exchanging e_1 with the normalized constant vector.
inline Matrix constant_complement_basis(int n) {
    Vector u = -Vector::Ones(n) / std::sqrt(static_cast<double>(n));
    u[0] += 1.0;
    const double nrm = u.norm();
    Matrix h = Matrix::Identity(n, n);
    if (nrm > 1e-15) {
        u /= nrm;
        h -= 2.0 * u * u.transpose();
    }
    return h.rightCols(n - 1);
}

} // namespace detail

struct LocalCurvature {
    double kappa = 0.0;    // smallest generalized eigenvalue
    Vector spectrum;       // all n-1 eigenvalues, ascending
    Vector minimizer;      // unit-norm eigenvector for kappa, sum-zero
    double residual = 0.0; // ||L(A) a - kappa L(Theta) a||
    double scale = 0.0;    // ||L(A)||_F, reference for the residual
};

inline LocalCurvature local_curvature(const GammaContext& ctx) {
    const int n = ctx.graph->n;
    if (n < 2) throw config_error("local_curvature: graph needs at least 2 vertices");
    if (!ctx.graph->connected()) throw config_error("local_curvature: graph must be connected");
    for (int i = 0; i < n; ++i)
        if (ctx.p[i] < 1e-9) throw boundary_error("local_curvature: point within 1e-9 of the simplex boundary");

    const Matrix l_theta = laplacian_unchecked(ctx.theta);
    const Matrix l_a = laplacian_unchecked(gamma2_matrix(ctx));
    const Matrix b = detail::constant_complement_basis(n);

    Matrix lhs = b.transpose() * l_a * b;
    lhs = 0.5 * (lhs + lhs.transpose()).eval();
    Matrix rhs = b.transpose() * l_theta * b;
    rhs = 0.5 * (rhs + rhs.transpose()).eval();

    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(lhs, rhs);
    if (solver.info() != Eigen::Success)
        throw numeric_error("local_curvature: generalized eigensolver failed (is p interior and the mean positive?)");

    LocalCurvature out;
    out.spectrum = solver.eigenvalues();
    out.kappa = out.spectrum[0];
    Vector alpha = b * solver.eigenvectors().col(0);
    alpha.normalize();
    // Deterministic sign: largest-magnitude component positive.
    int imax = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(alpha[i]) > std::abs(alpha[imax])) imax = i;
    if (alpha[imax] < 0.0) alpha = -alpha;
    out.minimizer = alpha;
    out.scale = l_a.norm();
    out.residual = (l_a * alpha - out.kappa * l_theta * alpha).norm();
    return out;
}

inline LocalCurvature local_curvature(const Graph& g, const Mean& mean, const Energy& energy, const Vector& p) {
    return local_curvature(GammaContext::build(g, mean, energy, p));
}

// Rayleigh quotient Gamma2/Gamma1 for one direction; >= kappa always.
inline double rayleigh_quotient(const GammaContext& ctx, const Vector& f) {
    const double g1 = gamma1(ctx, f);
    if (!(g1 > 0.0)) throw numeric_error("rayleigh_quotient: Gamma1(f) is not positive");
    return gamma2(ctx, f) / g1;
}

// Multiplying the mean by c > 0 multiplies every curvature by c (each
// Gamma2 term carries exactly two mean-order factors against Gamma1's one).
// Returns the relative mismatch of that identity at p; a diagnostic for
// custom means.
inline double curvature_scaling_residual(const Graph& g, const Mean& mean, const Energy& energy, const Vector& p,
                                         double c) {
    if (!(c > 0.0)) throw config_error("curvature_scaling_residual: c must be positive");
    const double base = local_curvature(g, mean, energy, p).kappa;
    const Mean scaled = Mean::custom([mean, c](double s, double t) { return c * mean.theta(s, t); },
                                     [mean, c](double s, double t) { return c * mean.partial_s(s, t); });
    const double scaled_kappa = local_curvature(g, scaled, energy, p).kappa;
    return std::abs(scaled_kappa - c * base) / std::max(1.0, std::abs(c * base));
}

// ===== Global curvature =====
//
// kappa_0 = inf over interior p of kappa(p). Minimized over the simplex
// with a coarse scan (tensor barycentric grid for n <= 4, a seeded
// quasi-uniform pool otherwise) followed by pairwise-coordinate descent:
// moves p -> p + t (e_i - e_j) stay on the simplex, and golden-section in t
// refines each pair in turn.
//
// Some mean/energy pairs have kappa -> -infinity toward the boundary. The
// detector re-minimizes at shrinking margins 1e-3, 1e-4, 1e-5 and reports
// kappa_0 = -infinity only when the minima are negative, strictly
// decreasing, and grow by at least a factor 10 across the sweep; bounded
// families converge in the sweep and fail that test.

struct GlobalCurvatureOptions {
    double margin = 1e-4;    // floor on each coordinate during the search
    int grid_per_dim = 33;   // barycentric grid resolution for n <= 4
    int multistarts = 16;    // scan points kept for refinement
    int pool_factor = 1024;  // pool size = multistarts * pool_factor for n > 4
    std::uint64_t seed = 2026;
    int max_passes = 40;           // coordinate-descent sweeps per start
    double improvement_tol = 1e-11;
    bool divergence_sweep = true;  // run the shrinking-margin detector
};

struct GlobalCurvature {
    double kappa = 0.0; // -infinity when the sweep flags divergence
    Vector argmin;      // minimizer at the requested margin
    bool diverging = false;
    std::vector<double> sweep_margins;
    std::vector<double> sweep_values;
};

namespace detail {

inline double golden_section_min(const std::function<double(double)>& f, double lo, double hi, double tol,
                                 int max_iter = 90) {
    const double inv_phi = 0.6180339887498948482;
    double a = lo, d = hi;
    double b = d - inv_phi * (d - a);
    double c = a + inv_phi * (d - a);
    double fb = f(b), fc = f(c);
    for (int it = 0; it < max_iter && (d - a) > tol; ++it) {
        if (fb <= fc) {
            d = c;
            c = b;
            fc = fb;
            b = d - inv_phi * (d - a);
            fb = f(b);
        } else {
            a = b;
            b = c;
            fb = fc;
            c = a + inv_phi * (d - a);
            fc = f(c);
        }
    }
    return fb <= fc ? b : c;
}

inline std::vector<Vector> simplex_scan_points(int n, const GlobalCurvatureOptions& opts) {
    std::vector<Vector> pts;
    const double m = opts.margin;
    if (n == 2) {
        const int g = std::max(2, opts.grid_per_dim);
        for (int i = 0; i < g; ++i) {
            const double x = m + (1.0 - 2.0 * m) * i / (g - 1);
            Vector p(2);
            p << x, 1.0 - x;
            pts.push_back(p);
        }
    } else if (n <= 4) {
        const int g = std::max(2, opts.grid_per_dim);
        std::vector<double> levels(g);
        for (int i = 0; i < g; ++i) levels[i] = m + (1.0 - 2.0 * m) * i / (g - 1);
        if (n == 3) {
            for (double x : levels)
                for (double y : levels) {
                    const double z = 1.0 - x - y;
                    if (z < m) continue;
                    Vector p(3);
                    p << x, y, z;
                    pts.push_back(p);
                }
        } else {
            for (double x : levels)
                for (double y : levels)
                    for (double z : levels) {
                        const double w = 1.0 - x - y - z;
                        if (w < m) continue;
                        Vector p(4);
                        p << x, y, z, w;
                        pts.push_back(p);
                    }
        }
    } else {
        Rng rng(opts.seed);
        const int count = opts.multistarts * opts.pool_factor;
        pts.reserve(count);
        for (int i = 0; i < count; ++i) pts.push_back(sample_simplex(rng, n, m));
    }
    return pts;
}

struct MarginMinimum {
    double value = 0.0;
    Vector argmin;
};

// Scan + pairwise-coordinate-descent minimization of an arbitrary objective
// over the interior of the simplex; shared by the curvature search and the
// entropy-power constant search.
inline MarginMinimum minimize_on_simplex(const std::function<double(const Vector&)>& eval, int n,
                                         const GlobalCurvatureOptions& base, double margin) {
    GlobalCurvatureOptions opts = base;
    opts.margin = margin;

    auto pts = simplex_scan_points(n, opts);
    std::vector<std::pair<double, int>> scored;
    scored.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) scored.emplace_back(eval(pts[i]), static_cast<int>(i));
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    const int starts = std::min<int>(opts.multistarts, static_cast<int>(scored.size()));
    MarginMinimum best;
    best.value = std::numeric_limits<double>::infinity();
    for (int s = 0; s < starts; ++s) {
        Vector p = pts[scored[s].second];
        double v = scored[s].first;
        for (int pass = 0; pass < opts.max_passes; ++pass) {
            const double before = v;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const double lo = margin - p[i]; // p_i + t >= margin
                    const double hi = p[j] - margin; // p_j - t >= margin
                    if (hi - lo < 1e-14) continue;
                    auto line = [&](double t) {
                        Vector q = p;
                        q[i] += t;
                        q[j] -= t;
                        return eval(q);
                    };
                    // Objectives can be multimodal along a chord (J/I^2 blows
                    // up at the barycenter), so bracket with a coarse scan
                    // before golden-section.
                    constexpr int scan = 17;
                    const double spacing = (hi - lo) / (scan - 1);
                    double center = 0.0, best_v = v;
                    for (int a = 0; a < scan; ++a) {
                        const double t = lo + spacing * a;
                        const double vt = line(t);
                        if (vt < best_v) {
                            best_v = vt;
                            center = t;
                        }
                    }
                    const double blo = std::max(lo, center - spacing);
                    const double bhi = std::min(hi, center + spacing);
                    const double t = golden_section_min(line, blo, bhi, 1e-13 * std::max(1.0, bhi - blo));
                    const double vt = line(t);
                    if (vt < v) {
                        v = vt;
                        p[i] += t;
                        p[j] -= t;
                    } else if (best_v < v) {
                        v = best_v;
                        p[i] += center;
                        p[j] -= center;
                    }
                }
            if (before - v < opts.improvement_tol) break;
        }
        if (v < best.value) {
            best.value = v;
            best.argmin = p;
        }
    }
    return best;
}

} // namespace detail

inline GlobalCurvature global_curvature(const Graph& g, const Mean& mean, const Energy& energy,
                                        const GlobalCurvatureOptions& opts = {}) {
    if (!(opts.margin > 0.0 && opts.margin < 0.5)) throw config_error("global_curvature: margin must be in (0, 0.5)");
    auto eval = [&](const Vector& p) { return local_curvature(g, mean, energy, p).kappa; };
    GlobalCurvature out;
    auto at_requested = detail::minimize_on_simplex(eval, g.n, opts, opts.margin);
    out.kappa = at_requested.value;
    out.argmin = at_requested.argmin;

    if (opts.divergence_sweep) {
        out.sweep_margins = {1e-3, 1e-4, 1e-5};
        for (double m : out.sweep_margins) {
            if (m == opts.margin)
                out.sweep_values.push_back(at_requested.value);
            else
                out.sweep_values.push_back(detail::minimize_on_simplex(eval, g.n, opts, m).value);
        }
        const double v0 = out.sweep_values[0], v1 = out.sweep_values[1], v2 = out.sweep_values[2];
        const bool all_negative = v0 < 0.0 && v1 < 0.0 && v2 < 0.0;
        const bool decreasing = v1 < v0 && v2 < v1;
        const bool factor_ten = v2 <= 10.0 * v0;
        if (all_negative && decreasing && factor_ten) {
            out.diverging = true;
            out.kappa = -std::numeric_limits<double>::infinity();
        }
    }
    return out;
}

// ===== Constant-curvature detection =====

struct ConstantCurvatureReport {
    bool constant = false;
    double value = 0.0;  // mean of the sampled local curvatures
    double spread = 0.0; // max - min over the sample
    double min_value = 0.0;
    double max_value = 0.0;
};

inline ConstantCurvatureReport constant_curvature_check(const Graph& g, const Mean& mean, const Energy& energy,
                                                        int samples = 64, std::uint64_t seed = 7,
                                                        double tol = 1e-8, double margin = 1e-2) {
    if (samples < 2) throw config_error("constant_curvature_check: need at least 2 samples");
    Rng rng(seed);
    ConstantCurvatureReport rep;
    rep.min_value = std::numeric_limits<double>::infinity();
    rep.max_value = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::int64_t count = 0;
    // Constant curvature means the whole relative spectrum, not only the
    // smallest pair, sits at one value across the sampled points.
    for (int s = 0; s < samples; ++s) {
        const Vector p = sample_simplex(rng, g.n, margin);
        const Vector spec = local_curvature(g, mean, energy, p).spectrum;
        for (Eigen::Index i = 0; i < spec.size(); ++i) {
            sum += spec[i];
            ++count;
            rep.min_value = std::min(rep.min_value, spec[i]);
            rep.max_value = std::max(rep.max_value, spec[i]);
        }
    }
    rep.value = sum / static_cast<double>(count);
    rep.spread = rep.max_value - rep.min_value;
    rep.constant = rep.spread <= tol;
    return rep;
}

} // namespace mfig
