#include <catch2/catch_amalgamated.hpp>

#include "mfig/mfig.hpp"

using namespace mfig;

namespace {

TwoPointProblem problem(Mean m) { return TwoPointProblem{std::move(m), Energy::shannon()}; }

} // namespace

TEST_CASE("two-point curvature hits the frozen closed-form values", "[curvature]") {
    REQUIRE(kappa_k2(problem(Mean::arithmetic()), 0.25) == Catch::Approx(8.0 / 3.0).epsilon(1e-13));
    REQUIRE(kappa_k2(problem(Mean::logarithmic()), 0.9) ==
            Catch::Approx(3.02275383694852754).epsilon(1e-13));
    REQUIRE(kappa_k2(problem(Mean::geometric()), 0.01) ==
            Catch::Approx(-1.26438142423996961).epsilon(1e-13));
    REQUIRE(kappa_k2(problem(Mean::spectral_graph()), 0.25) ==
            Catch::Approx(0.52552686251996134).epsilon(1e-13));
    // interior in x only
    REQUIRE_THROWS_AS(kappa_k2(problem(Mean::arithmetic()), 0.0), config_error);
    REQUIRE_THROWS_AS(kappa_k2(problem(Mean::arithmetic()), 1.0), config_error);
}

TEST_CASE("eigensolver route equals the closed two-point formula", "[curvature]") {
    Rng rng(101);
    const Graph k2 = complete_graph(2);
    const std::vector<Mean> means = {Mean::arithmetic(), Mean::geometric(), Mean::logarithmic(),
                                     Mean::spectral_graph()};
    for (const Mean& m : means) {
        const TwoPointProblem prob = problem(m);
        for (int s = 0; s < 200; ++s) {
            const double x = rng.uniform(0.01, 0.99);
            Vector p(2);
            p << x, 1.0 - x;
            const double via_eigen = local_curvature(k2, m, Energy::shannon(), p).kappa;
            const double via_formula = kappa_k2(prob, x);
            REQUIRE(via_eigen == Catch::Approx(via_formula).epsilon(1e-9).margin(1e-12));
        }
    }
}

TEST_CASE("local curvature report is internally consistent", "[curvature]") {
    Rng rng(103);
    const Graph g = cycle_graph(4);
    for (int s = 0; s < 25; ++s) {
        const Vector p = sample_simplex(rng, 4, 0.03);
        const auto ctx = GammaContext::build(g, Mean::logarithmic(), Energy::shannon(), p);
        const LocalCurvature lc = local_curvature(ctx);
        REQUIRE(lc.spectrum.size() == 3);
        for (int i = 1; i < 3; ++i) REQUIRE(lc.spectrum[i] >= lc.spectrum[i - 1]);
        REQUIRE(lc.kappa == lc.spectrum[0]);
        REQUIRE(lc.minimizer.norm() == Catch::Approx(1.0).epsilon(1e-12));
        REQUIRE(std::abs(lc.minimizer.sum()) <= 1e-9);
        REQUIRE(lc.residual <= 1e-8 * std::max(1.0, lc.scale));
        // the minimizer realizes the curvature as a Rayleigh quotient
        REQUIRE(rayleigh_quotient(ctx, lc.minimizer) ==
                Catch::Approx(lc.kappa).epsilon(1e-8).margin(1e-10));
    }
}

TEST_CASE("rayleigh quotients never undercut the eigenvalue", "[curvature]") {
    Rng rng(107);
    const Graph g = complete_graph(3);
    const Vector p = sample_simplex(rng, 3, 0.05);
    const auto ctx = GammaContext::build(g, Mean::logarithmic(), Energy::shannon(), p);
    const double kappa = local_curvature(ctx).kappa;
    for (int s = 0; s < 500; ++s) {
        Vector f(3);
        for (int i = 0; i < 3; ++i) f[i] = rng.uniform(-1.0, 1.0);
        if (gamma1(ctx, f) < 1e-12) continue;
        REQUIRE(rayleigh_quotient(ctx, f) >= kappa - 1e-8);
    }
    REQUIRE_THROWS_AS(rayleigh_quotient(ctx, Vector::Constant(3, 2.0)), numeric_error);
}

TEST_CASE("local curvature rejects what it cannot mean", "[curvature]") {
    Graph disconnected;
    disconnected.n = 4;
    add_edge(disconnected, 0, 1);
    add_edge(disconnected, 2, 3);
    Vector p = uniform_distribution(4);
    REQUIRE_THROWS_AS(local_curvature(disconnected, Mean::arithmetic(), Energy::shannon(), p), config_error);

    const Graph k2 = complete_graph(2);
    Vector boundary(2);
    boundary << 1.0 - 1e-12, 1e-12;
    REQUIRE_THROWS_AS(local_curvature(k2, Mean::arithmetic(), Energy::shannon(), boundary), boundary_error);
}

TEST_CASE("curvature scales linearly with the mean", "[curvature]") {
    Rng rng(109);
    const Graph g = complete_graph(3);
    Vector v(3);
    v << 0.3, -0.2, 1.1;
    const Energy e = Energy::linear(v);
    for (const Mean& m : {Mean::arithmetic(), Mean::logarithmic()}) {
        const Vector p = sample_simplex(rng, 3, 0.05);
        REQUIRE(curvature_scaling_residual(g, m, e, p, 2.5) <= 1e-9);
        REQUIRE(curvature_scaling_residual(g, m, e, p, 0.125) <= 1e-9);
    }
    REQUIRE_THROWS_AS(
        curvature_scaling_residual(g, Mean::arithmetic(), e, uniform_distribution(3), -1.0), config_error);
}

TEST_CASE("global curvature on the two-point graph", "[curvature]") {
    const Graph k2 = complete_graph(2);
    const Energy shannon = Energy::shannon();

    const GlobalCurvature ari = global_curvature(k2, Mean::arithmetic(), shannon);
    REQUIRE_FALSE(ari.diverging);
    REQUIRE(ari.kappa == Catch::Approx(2.0).margin(1e-4));
    REQUIRE(std::abs(ari.argmin[0] - 0.5) <= 1e-2);

    const GlobalCurvature lg = global_curvature(k2, Mean::logarithmic(), shannon);
    REQUIRE_FALSE(lg.diverging);
    REQUIRE(lg.kappa == Catch::Approx(2.0).margin(1e-4));

    const GlobalCurvature sg = global_curvature(k2, Mean::spectral_graph(), shannon);
    REQUIRE_FALSE(sg.diverging);
    REQUIRE(sg.kappa == Catch::Approx(0.5).margin(1e-4));

    const GlobalCurvature ge = global_curvature(k2, Mean::geometric(), shannon);
    REQUIRE(ge.diverging);
    REQUIRE(std::isinf(ge.kappa));
    REQUIRE(ge.kappa < 0.0);
    // the sweep that justified the sentinel is reported
    REQUIRE(ge.sweep_margins.size() == 3);
    REQUIRE(ge.sweep_values.size() == 3);
    REQUIRE(ge.sweep_values[2] < ge.sweep_values[1]);
}

TEST_CASE("global curvature options are validated and deterministic", "[curvature]") {
    const Graph k2 = complete_graph(2);
    GlobalCurvatureOptions bad;
    bad.margin = 0.7;
    REQUIRE_THROWS_AS(global_curvature(k2, Mean::arithmetic(), Energy::shannon(), bad), config_error);

    GlobalCurvatureOptions opts;
    const GlobalCurvature a = global_curvature(k2, Mean::logarithmic(), Energy::shannon(), opts);
    const GlobalCurvature b = global_curvature(k2, Mean::logarithmic(), Energy::shannon(), opts);
    REQUIRE(a.kappa == b.kappa);
    REQUIRE((a.argmin - b.argmin).norm() == 0.0);
}

TEST_CASE("seeded pool search handles more than four vertices", "[curvature]") {
    const Graph p5 = path_graph(5);
    GlobalCurvatureOptions opts;
    opts.multistarts = 4;
    opts.pool_factor = 256;
    opts.divergence_sweep = false;
    const GlobalCurvature a = global_curvature(p5, Mean::arithmetic(), Energy::shannon(), opts);
    REQUIRE(std::isfinite(a.kappa));
    const GlobalCurvature b = global_curvature(p5, Mean::arithmetic(), Energy::shannon(), opts);
    REQUIRE(a.kappa == b.kappa);
    // a Rayleigh sample at the argmin cannot undercut the reported minimum
    const auto lc = local_curvature(p5, Mean::arithmetic(), Energy::shannon(), a.argmin);
    REQUIRE(lc.kappa >= a.kappa - 1e-9);
}

TEST_CASE("transport-information means have constant curvature", "[curvature]") {
    const Graph k2 = complete_graph(2);
    const Energy shannon = Energy::shannon();
    const double target = 8.0 * std::log(2.0);

    const auto tim = constant_curvature_check(k2, Mean::transport_information(shannon), shannon);
    REQUIRE(tim.constant);
    REQUIRE(tim.spread <= 1e-8);
    REQUIRE(tim.value == Catch::Approx(target).epsilon(1e-9));

    // explicit constant: C = 1 with the quadratic entropy
    const Energy quad = Energy::entropy(EntropyKind::quadratic);
    const auto unit = constant_curvature_check(k2, Mean::transport_information(quad, 1.0), quad);
    REQUIRE(unit.constant);
    REQUIRE(unit.value == Catch::Approx(1.0).epsilon(1e-10));

    // a non-tim mean is visibly non-constant
    const auto ari = constant_curvature_check(k2, Mean::arithmetic(), shannon);
    REQUIRE_FALSE(ari.constant);
    REQUIRE(ari.spread > 0.1);

    REQUIRE_THROWS_AS(constant_curvature_check(k2, Mean::arithmetic(), shannon, 1), config_error);
}
