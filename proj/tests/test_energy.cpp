#include <catch2/catch_amalgamated.hpp>

#include "mfig/mfig.hpp"

using namespace mfig;

namespace {

// Central finite differences, the derivative oracle everything else is
// checked against.
Vector fd_gradient(const Energy& e, const Vector& p, double h = 1e-6) {
    Vector g(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        Vector hi = p, lo = p;
        hi[i] += h;
        lo[i] -= h;
        g[i] = (e.value(hi) - e.value(lo)) / (2 * h);
    }
    return g;
}

Matrix fd_hessian(const Energy& e, const Vector& p, double h = 1e-5) {
    Matrix m(p.size(), p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        Vector hi = p, lo = p;
        hi[i] += h;
        lo[i] -= h;
        m.col(i) = (e.gradient(hi) - e.gradient(lo)) / (2 * h);
    }
    return 0.5 * (m + m.transpose());
}

} // namespace

TEST_CASE("energy values match the closed forms", "[energy]") {
    Vector p(2);
    p << 0.5, 0.5;
    Vector v(2);
    v << 1.0, 2.0;
    REQUIRE(Energy::linear(v).value(p) == Catch::Approx(1.5));

    REQUIRE(Energy::shannon().value(p) == Catch::Approx(-std::log(2.0)).epsilon(1e-14));

    Matrix w(2, 2);
    w << 0, 1, 1, 0;
    Vector q(2);
    q << 0.3, 0.7;
    REQUIRE(Energy::interaction(w).value(q) == Catch::Approx(0.21));
}

TEST_CASE("gradients match the stated per-kind forms", "[energy]") {
    Vector v(2);
    v << 1.0, 2.0;
    Vector p(2);
    p << 0.3, 0.7;
    const Vector gl = Energy::linear(v).gradient(p);
    REQUIRE(gl[0] == 1.0);
    REQUIRE(gl[1] == 2.0);

    Vector half(2);
    half << 0.5, 0.5;
    const Vector gs = Energy::shannon().gradient(half);
    REQUIRE(gs[0] == Catch::Approx(1.0 + std::log(0.5)).epsilon(1e-14));
    REQUIRE(gs[0] - gs[1] == 0.0);

    Matrix w(2, 2);
    w << 0, 1, 1, 0;
    const Vector gi = Energy::interaction(w).gradient(p);
    REQUIRE(gi[0] == Catch::Approx(0.7));
    REQUIRE(gi[1] == Catch::Approx(0.3));
}

TEST_CASE("second partials: zero, W, and diagonal U''", "[energy]") {
    Vector p(2);
    p << 0.25, 0.75;
    Vector v(2);
    v << 3.0, -1.0;
    REQUIRE(Energy::linear(v).second_partials(p).norm() == 0.0);

    const Matrix hs = Energy::shannon().second_partials(p);
    REQUIRE(hs(0, 0) == Catch::Approx(4.0));
    REQUIRE(hs(1, 1) == Catch::Approx(4.0 / 3.0));
    REQUIRE(hs(0, 1) == 0.0);

    Matrix w(2, 2);
    w << 0.5, 1, 1, 0.25;
    const Energy sum = Energy::sum({Energy::linear(v), Energy::interaction(w)});
    REQUIRE((sum.second_partials(p) - w).norm() == 0.0);
}

TEST_CASE("quadratic entropy is x^2/2 with linear derivative", "[energy]") {
    const Energy e = Energy::entropy(EntropyKind::quadratic);
    Vector p(3);
    p << 0.2, 0.3, 0.5;
    REQUIRE(e.value(p) == Catch::Approx(0.5 * (0.04 + 0.09 + 0.25)).epsilon(1e-14));
    REQUIRE(e.gradient(p)[1] == Catch::Approx(0.3));
    REQUIRE(e.second_partials(p)(2, 2) == Catch::Approx(1.0));
}

TEST_CASE("gradient and hessian match finite differences for every kind", "[energy]") {
    Rng rng(17);
    Vector v(4);
    Matrix w(4, 4);
    for (int i = 0; i < 4; ++i) {
        v[i] = rng.uniform(-1.0, 1.0);
        for (int j = 0; j <= i; ++j) w(i, j) = w(j, i) = rng.uniform(-1.0, 1.0);
    }
    const std::vector<Energy> kinds = {Energy::linear(v), Energy::interaction(w), Energy::shannon(),
                                       Energy::entropy(EntropyKind::quadratic),
                                       Energy::sum({Energy::linear(v), Energy::shannon()})};
    for (const Energy& e : kinds) {
        for (int s = 0; s < 100; ++s) {
            const Vector p = sample_simplex(rng, 4, 0.05);
            const Vector g = e.gradient(p);
            const Vector g_fd = fd_gradient(e, p);
            REQUIRE((g - g_fd).norm() <= 1e-6 * std::max(1.0, g.norm()));
            if (s < 10) {
                const Matrix h = e.second_partials(p);
                const Matrix h_fd = fd_hessian(e, p);
                REQUIRE((h - h_fd).norm() <= 1e-5 * std::max(1.0, h.norm()));
            }
        }
    }
}

TEST_CASE("interaction requires a symmetric W", "[energy]") {
    Matrix w(2, 2);
    w << 0, 1, 2, 0;
    REQUIRE_THROWS_AS(Energy::interaction(w), config_error);
}

TEST_CASE("shannon extends to the boundary by continuity", "[energy]") {
    Vector p(2);
    p << 1.0, 0.0;
    // Values use the 0 log 0 = 0 convention; the gradient blows up instead.
    REQUIRE(Energy::shannon().value(p) == 0.0);
    REQUIRE(std::isinf(Energy::shannon().gradient(p)[1]));
}

TEST_CASE("dimension checks name the caller", "[energy]") {
    Vector v(2);
    v << 1.0, 2.0;
    const Energy e = Energy::linear(v);
    REQUIRE(e.fixed_size() == 2);
    REQUIRE(Energy::shannon().fixed_size() == 0); // size-agnostic
    REQUIRE_NOTHROW(e.check_size(2, "somewhere"));
    REQUIRE_THROWS_AS(e.check_size(3, "somewhere"), config_error);
    try {
        e.check_size(3, "somewhere");
    } catch (const config_error& err) {
        REQUIRE(std::string(err.what()).find("somewhere") != std::string::npos);
    }
}

TEST_CASE("energy json round trip", "[energy]") {
    const std::string text = R"({"kind":"sum","parts":[
        {"kind":"linear","V":[0.0,1.0]},
        {"kind":"interaction","W":[[0.0,0.5],[0.5,0.0]]},
        {"kind":"entropy","U":"shannon"}]})";
    const Energy e = Energy::from_json(nlohmann::json::parse(text));
    const Energy back = Energy::from_json(e.to_json());
    Rng rng(3);
    for (int s = 0; s < 20; ++s) {
        const Vector p = sample_simplex(rng, 2, 0.01);
        REQUIRE(e.value(p) == back.value(p));
        REQUIRE((e.gradient(p) - back.gradient(p)).norm() == 0.0);
    }
}

TEST_CASE("energy json errors name the offending field", "[energy]") {
    auto message_of = [](const std::string& text) {
        try {
            Energy::from_json(nlohmann::json::parse(text));
        } catch (const config_error& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    REQUIRE(message_of(R"({"V":[1,2]})").find("kind") != std::string::npos);
    REQUIRE(message_of(R"({"kind":"linear"})").find("V") != std::string::npos);
    REQUIRE(message_of(R"({"kind":"interaction","W":[[0,1]]})").find("W") != std::string::npos);
    REQUIRE(message_of(R"({"kind":"entropy","U":"tsallis"})").find("U") != std::string::npos);
    REQUIRE(message_of(R"({"kind":"sum"})").find("parts") != std::string::npos);
    REQUIRE(message_of(R"({"kind":"sum","parts":[]})").find("parts") != std::string::npos);
    REQUIRE(message_of(R"({"kind":"sombrero"})").find("kind") != std::string::npos);
}

TEST_CASE("custom entropy profile is used verbatim", "[energy]") {
    const Energy e = Energy::entropy_custom([](double x) { return x * x * x; },
                                            [](double x) { return 3 * x * x; }, [](double x) { return 6 * x; });
    Vector p(2);
    p << 0.5, 0.5;
    REQUIRE(e.value(p) == Catch::Approx(0.25));
    REQUIRE(e.gradient(p)[0] == Catch::Approx(0.75));
    REQUIRE(e.second_partials(p)(1, 1) == Catch::Approx(3.0));
}
