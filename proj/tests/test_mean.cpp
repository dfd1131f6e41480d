#include <catch2/catch_amalgamated.hpp>

#include "mfig/mfig.hpp"

using namespace mfig;

namespace {

std::vector<std::pair<std::string, Mean>> builtin_means() {
    const Energy shannon = Energy::shannon();
    return {{"arithmetic", Mean::arithmetic()},
            {"geometric", Mean::geometric()},
            {"logarithmic", Mean::logarithmic()},
            {"spectral", Mean::spectral_graph()},
            {"tim", Mean::transport_information(shannon)}};
}

} // namespace

TEST_CASE("means are symmetric and positive", "[mean]") {
    Rng rng(11);
    for (const auto& [name, m] : builtin_means()) {
        INFO(name);
        // tim's off-diagonal branch evaluates x = s/(s+t) vs t/(s+t), so the
        // two orders round differently in the last couple of bits
        const double sym_eps = name == "tim" ? 1e-10 : 1e-12;
        for (int k = 0; k < 200; ++k) {
            const double s = rng.uniform(1e-4, 2.0);
            const double t = rng.uniform(1e-4, 2.0);
            REQUIRE(m.theta(s, t) > 0.0);
            REQUIRE(m.theta(s, t) == Catch::Approx(m.theta(t, s)).epsilon(sym_eps));
        }
    }
}

TEST_CASE("means are 1-homogeneous", "[mean]") {
    Rng rng(12);
    for (const auto& [name, m] : builtin_means()) {
        INFO(name);
        for (int k = 0; k < 100; ++k) {
            const double s = rng.uniform(1e-3, 1.0);
            const double t = rng.uniform(1e-3, 1.0);
            const double c = rng.uniform(0.1, 10.0);
            REQUIRE(m.theta(c * s, c * t) == Catch::Approx(c * m.theta(s, t)).epsilon(1e-11));
        }
    }
}

TEST_CASE("mean spot values", "[mean]") {
    REQUIRE(Mean::arithmetic().theta(0.3, 0.7) == Catch::Approx(0.5).epsilon(1e-15));
    REQUIRE(Mean::logarithmic().theta(1.0, 1.0) == 1.0);
    REQUIRE(Mean::logarithmic().theta(0.9, 0.1) ==
            Catch::Approx(0.8 / std::log(9.0)).epsilon(1e-14));
    REQUIRE(Mean::logarithmic().theta(0.9, 0.1) ==
            Catch::Approx(0.36409569065073496).epsilon(1e-14));
    REQUIRE(Mean::geometric().partial_s(4.0, 1.0) == Catch::Approx(0.25).epsilon(1e-14));
    // spectral value on the diagonal: (s / (2 sqrt(s)))^2 = s/4
    REQUIRE(Mean::spectral_graph().theta(0.36, 0.36) == Catch::Approx(0.09).epsilon(1e-13));
}

TEST_CASE("transport-information mean has the closed shannon form", "[mean]") {
    const Mean tim = Mean::transport_information(Energy::shannon());
    const double ln2 = std::log(2.0);
    REQUIRE(tim.tim_constant() == Catch::Approx(8.0 * ln2).epsilon(1e-13));
    // diagonal: theta(s,s) = C * 2s / e''(1/2) = C s / 2
    REQUIRE(tim.theta(0.5, 0.5) == Catch::Approx(2.0 * ln2).epsilon(1e-10));
    REQUIRE(tim.theta(0.2, 0.2) == Catch::Approx(4.0 * 0.2 * ln2).epsilon(1e-10));
    Rng rng(5);
    for (int k = 0; k < 200; ++k) {
        const double a = rng.uniform(1e-3, 1.0);
        const double b = rng.uniform(1e-3, 1.0);
        // the numerator cancels quadratically on the diagonal, so keep the
        // double-precision oracle where it is still sharp
        if (std::abs(a - b) < 0.05 * (a + b)) continue;
        const double num = a * std::log(a) + b * std::log(b) - (a + b) * std::log(0.5 * (a + b));
        const double den = std::log(a) - std::log(b);
        const double closed = 16.0 * ln2 * num / (den * den);
        REQUIRE(tim.theta(a, b) == Catch::Approx(closed).epsilon(1e-10));
    }
}

TEST_CASE("series windows join the direct formulas smoothly", "[mean]") {
    // Just inside the series window the value must agree with the direct
    // quotient evaluated in plain doubles.
    const Mean lg = Mean::logarithmic();
    for (double delta : {9e-5, 5e-5, 1e-5}) {
        const double s = 1.0 + delta, t = 1.0;
        const double direct = (s - t) / (std::log(s) - std::log(t));
        REQUIRE(lg.theta(s, t) == Catch::Approx(direct).epsilon(1e-10));
    }
    // For tim the double-precision quotient is the noisy side near the
    // diagonal, so compare against the quadratic expansion
    //   theta = C (s+t)/4 (1 - 2 u^2),  u = (s-t)/(2(s+t)),
    // which is sharp to O(u^4) on both sides of the branch switch.
    const Mean tim = Mean::transport_information(Energy::shannon());
    const double c = tim.tim_constant();
    for (double delta : {6e-3, 4.1e-3, 4e-4, 9.9e-5, 2e-5}) {
        const double s = 0.5 + delta, t = 0.5;
        const double u = 0.5 * (s - t) / (s + t);
        const double expansion = c * (s + t) / 4.0 * (1.0 - 2.0 * u * u);
        REQUIRE(tim.theta(s, t) == Catch::Approx(expansion).epsilon(1e-8));
    }
}

TEST_CASE("analytic partials match finite differences", "[mean]") {
    Rng rng(21);
    for (const auto& [name, m] : builtin_means()) {
        INFO(name);
        const Mean fd = m.with_derivative_mode(DerivativeMode::finite_difference);
        // tim's value cancels near the diagonal, which feeds noise into the
        // FD quotient there; everywhere else the stencil is clean
        const double eps = name == "tim" ? 1e-5 : 1e-6;
        for (int k = 0; k < 300; ++k) {
            const double s = rng.uniform(0.01, 1.0);
            const double t = rng.uniform(0.01, 1.0);
            // keep the FD stencil away from tim's series/direct hand-off,
            // where the central difference would bridge the two branches
            if (name == "tim" && std::abs(std::abs(s - t) / (s + t) - 4e-3) < 3e-4) continue;
            const double a = m.partial_s(s, t);
            const double b = fd.partial_s(s, t);
            REQUIRE(a == Catch::Approx(b).epsilon(eps).margin(1e-8));
        }
        // straddle the series thresholds explicitly
        for (double delta : {2e-4, 1e-4, 9e-5, 1e-5, 0.0}) {
            const double a = m.partial_s(0.4 + delta, 0.4);
            const double b = fd.partial_s(0.4 + delta, 0.4);
            REQUIRE(a == Catch::Approx(b).epsilon(2e-6).margin(1e-8));
        }
    }
}

TEST_CASE("transport-information partial is consistent across its branch switch", "[mean]") {
    // Two analytic evaluations that bracket the series window boundary must
    // agree to far better than the size of any plausible series mistake, and
    // the diagonal slope must equal C / e''(1/2) exactly.
    const Mean tim = Mean::transport_information(Energy::shannon());
    const double t = 0.4;
    auto s_for = [&](double u) { return t * (1.0 + 2.0 * u) / (1.0 - 2.0 * u); };
    // bracket the switch so tightly that the partial's own variation over the
    // bracket (~4e-7 relative) stays below the gate: only a genuine jump fails
    const double s_lo = s_for(2e-3 * (1 - 5e-5));
    const double s_hi = s_for(2e-3 * (1 + 5e-5));
    const double below = tim.partial_s(s_lo, t);
    const double above = tim.partial_s(s_hi, t);
    REQUIRE(below == Catch::Approx(above).epsilon(2e-6));
    // the value moves first-order in s across the bracket; a branch jump
    // would show up as a mismatch against the slope-predicted increment
    const double dv_actual = tim.theta(s_hi, t) - tim.theta(s_lo, t);
    const double dv_pred = 0.5 * (below + above) * (s_hi - s_lo);
    REQUIRE(std::abs(dv_actual - dv_pred) <= 1e-9 * tim.theta(s_lo, t));
    REQUIRE(tim.partial_s(0.4, 0.4) == Catch::Approx(tim.tim_constant() / 4.0).epsilon(1e-12));
}

TEST_CASE("euler identity holds for the 1-homogeneous built-ins", "[mean]") {
    for (const auto& [name, m] : builtin_means()) {
        INFO(name);
        const ErbarMaasReport rep = check_erbar_maas(m, 1000, 99);
        REQUIRE(rep.samples == 1000);
        REQUIRE(rep.max_euler_residual <= 1e-9);
    }
}

TEST_CASE("concave means satisfy the tangent-plane inequality", "[mean]") {
    for (const std::string name : {"arithmetic", "geometric", "logarithmic"}) {
        INFO(name);
        const Mean m = mean_from_string(name);
        const ErbarMaasReport rep = check_erbar_maas(m, 2000, 7);
        REQUIRE(rep.min_tangent_gap >= -1e-8);
    }
}

TEST_CASE("mean comparison chain geometric <= logarithmic <= arithmetic", "[mean]") {
    Rng rng(31);
    const Mean ge = Mean::geometric(), lo = Mean::logarithmic(), ar = Mean::arithmetic();
    for (int k = 0; k < 1000; ++k) {
        const double s = rng.uniform(1e-4, 3.0);
        const double t = rng.uniform(1e-4, 3.0);
        REQUIRE(ge.theta(s, t) <= lo.theta(s, t) + 1e-12);
        REQUIRE(lo.theta(s, t) <= ar.theta(s, t) + 1e-12);
    }
}

TEST_CASE("mean_from_string grammar", "[mean]") {
    REQUIRE(mean_from_string("arithmetic").kind() == MeanKind::arithmetic);
    REQUIRE(mean_from_string("geometric").kind() == MeanKind::geometric);
    REQUIRE(mean_from_string("logarithmic").kind() == MeanKind::logarithmic);
    REQUIRE(mean_from_string("spectral").kind() == MeanKind::spectral_graph);

    const Energy shannon = Energy::shannon();
    const Mean t1 = mean_from_string("tim", &shannon);
    REQUIRE(t1.kind() == MeanKind::transport_information);
    const Mean t2 = mean_from_string("tim:C=2.5", &shannon);
    REQUIRE(t2.tim_constant() == 2.5);

    REQUIRE_THROWS_AS(mean_from_string("tim"), config_error);            // needs the energy
    REQUIRE_THROWS_AS(mean_from_string("harmonic"), config_error);       // unknown name
    REQUIRE_THROWS_AS(mean_from_string("tim:C=x", &shannon), config_error);
    REQUIRE_THROWS_AS(mean_from_string("tim:K=2", &shannon), config_error);
}

TEST_CASE("transport-information mean validates its configuration", "[mean]") {
    Vector v(2);
    v << 0.0, 1.0; // not symmetric about 1/2
    REQUIRE_THROWS_AS(Mean::transport_information(Energy::linear(v)), config_error);
    REQUIRE_THROWS_AS(Mean::transport_information(Energy::shannon(), -1.0), config_error);
    // concave profile: e''(1/2) < 0
    const Energy cave = Energy::entropy_custom([](double x) { return -x * x; },
                                               [](double x) { return -2 * x; }, [](double) { return -2.0; });
    REQUIRE_THROWS_AS(Mean::transport_information(cave), config_error);
}

TEST_CASE("custom means and derivative modes", "[mean]") {
    const Mean harmonic = Mean::custom([](double s, double t) { return 2.0 * s * t / (s + t); });
    REQUIRE(harmonic.derivative_mode() == DerivativeMode::finite_difference);
    REQUIRE(harmonic.theta(1.0, 1.0) == Catch::Approx(1.0));
    // d/ds [2st/(s+t)] = 2 t^2/(s+t)^2
    REQUIRE(harmonic.partial_s(2.0, 1.0) == Catch::Approx(2.0 / 9.0).epsilon(1e-6));
    REQUIRE_THROWS_AS(harmonic.with_derivative_mode(DerivativeMode::analytic), config_error);
    REQUIRE_THROWS_AS(Mean::custom(nullptr), config_error);

    const Mean with_partial = Mean::custom([](double s, double t) { return 2.0 * s * t / (s + t); },
                                           [](double s, double t) { return 2.0 * t * t / ((s + t) * (s + t)); });
    REQUIRE(with_partial.derivative_mode() == DerivativeMode::analytic);
    REQUIRE(with_partial.partial_s(2.0, 1.0) == Catch::Approx(2.0 / 9.0).epsilon(1e-12));
}
