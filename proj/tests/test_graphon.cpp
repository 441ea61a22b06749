#include <doctest.h>

#include <numbers>

#include "momentnet/errors.hpp"
#include "momentnet/graphon.hpp"
#include "momentnet/inr.hpp"
#include "momentnet/rng.hpp"
#include "support.hpp"

using namespace momentnet;

TEST_CASE("analytic table values") {
    CHECK(analytic_graphon(1)(0.5, 0.5) == doctest::Approx(0.25));
    CHECK(analytic_graphon(4)(0.2, 0.6) == doctest::Approx(0.4));
    CHECK(analytic_graphon(12)(0.25, 0.75) == 0.0);
    CHECK(analytic_graphon(12)(0.25, 0.25) == 0.8);
    CHECK(analytic_graphon(13)(0.25, 0.75) == 0.8);
    CHECK(analytic_graphon(13)(0.75, 0.75) == 0.0);
    CHECK(analytic_graphon(2)(0.0, 0.0) == doctest::Approx(1.0));
    CHECK(analytic_graphon(10)(0.2, 0.9) == doctest::Approx(0.7));
    CHECK(analytic_graphon(11)(0.2, 0.9) == doctest::Approx(0.3));
    CHECK_THROWS_AS(analytic_graphon(0), DomainError);
    CHECK_THROWS_AS(analytic_graphon(14), DomainError);
}

TEST_CASE("block boundary convention") {
    const auto sbm = analytic_graphon(12);
    // block index floor(2x), clamped at x = 1
    CHECK(sbm(0.5, 0.5) == 0.8);
    CHECK(sbm(0.5, 1.0) == 0.8);
    CHECK(sbm(0.4999, 0.5) == 0.0);
    CHECK(sbm(0.0, 0.4999) == 0.8);
}

TEST_CASE("cosine graphon") {
    const auto w = cosine_graphon();
    CHECK(w(0, 0) == doctest::Approx(0.6));
    CHECK(w(1, 1) == doctest::Approx(0.6));
    for (double y : {0.0, 0.3, 0.77, 1.0}) CHECK(w(0.5, y) == doctest::Approx(0.5));
}

TEST_CASE("eval domain and constant") {
    const auto w = constant_graphon(0.3);
    CHECK(w(0.1, 0.9) == 0.3);
    CHECK(eval(w, 1.0, 0.0) == 0.3);
    CHECK_THROWS_AS(w(-0.01, 0.5), DomainError);
    CHECK_THROWS_AS(w(0.5, 1.01), DomainError);
    CHECK_THROWS_AS(constant_graphon(1.5), DomainError);
}

TEST_CASE("grid lookup is piecewise constant") {
    const auto w = grid_graphon(Grid(2, {0, 1, 1, 0}));
    CHECK(w(0.1, 0.9) == 1.0);
    CHECK(w(0.1, 0.2) == 0.0);
    CHECK(w(1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(Grid(2, {0, 1, 0.5, 0}), ValidationError);
    CHECK_THROWS_AS(Grid(2, {0, 1, 1}), ValidationError);
    CHECK_THROWS_AS(Grid(1, {1.5}), ValidationError);
}

TEST_CASE("range and symmetry for every kind") {
    std::vector<Graphon> zoo;
    for (int id = 1; id <= 13; ++id) zoo.push_back(analytic_graphon(id));
    zoo.push_back(constant_graphon(0.42));
    zoo.push_back(cosine_graphon());
    zoo.push_back(grid_graphon(discretize(analytic_graphon(3), 7)));
    zoo.push_back(model_graphon(init_params(16, 3)));
    for (const auto& w : zoo) {
        INFO(w.describe());
        bool ok = true;
        for (std::uint64_t i = 0; i < 10000; ++i) {
            const double x = SplitMix64::uniform_at(77, 2 * i);
            const double y = SplitMix64::uniform_at(77, 2 * i + 1);
            const double v = w(x, y);
            ok = ok && v >= 0.0 && v <= 1.0 && v == w(y, x);
        }
        CHECK(ok);
    }
}

TEST_CASE("discretize samples cell centers") {
    const auto c = discretize(constant_graphon(0.7), 3);
    for (double v : c.values()) CHECK(v == 0.7);
    const auto g = discretize(analytic_graphon(1), 2);
    CHECK(g(0, 0) == doctest::Approx(0.0625));
    CHECK(g(0, 1) == doctest::Approx(0.1875));
    CHECK(g(1, 0) == doctest::Approx(0.1875));
    CHECK(g(1, 1) == doctest::Approx(0.5625));
    CHECK_THROWS_AS(discretize(constant_graphon(0.5), 0), DomainError);

    const auto base = discretize(analytic_graphon(5), 9);
    CHECK(discretize(grid_graphon(base), 9) == base);
}

TEST_CASE("grid CSV round trip") {
    const auto g = discretize(analytic_graphon(2), 6);
    const auto text = write_grid_csv(g);
    CHECK(text.rfind("6\n", 0) == 0);
    CHECK(parse_grid_csv(text) == g);
    CHECK_THROWS(parse_grid_csv("2\n0,1\n1\n"));
    CHECK_THROWS(parse_grid_csv("2\n0,1\n0.5,0\n"));
}

TEST_CASE("graphon spec parsing") {
    CHECK(parse_graphon_spec("4").describe() == "analytic:4");
    CHECK(parse_graphon_spec("constant:0.25")(0.1, 0.2) == 0.25);
    CHECK(parse_graphon_spec("cosine")(0, 0) == doctest::Approx(0.6));
    CHECK_THROWS(parse_graphon_spec("constant:abc"));
    CHECK_THROWS(parse_graphon_spec("unknown"));
    CHECK_THROWS(parse_graphon_spec("99"));

    testing::TempDir dir("spec");
    const auto grid = discretize(analytic_graphon(4), 4);
    write_text_file(dir.path() / "g.csv", write_grid_csv(grid));
    CHECK(discretize(parse_graphon_spec("grid:" + (dir.path() / "g.csv").string()), 4) == grid);
    const auto params = init_params(8, 5);
    write_text_file(dir.path() / "m.txt", write_model(params));
    const auto m = parse_graphon_spec("model:" + (dir.path() / "m.txt").string());
    CHECK(m(0.2, 0.7) == forward(params, 0.2, 0.7));
}

TEST_CASE("quadrature moments of a constant graphon are exact") {
    const double p = 0.3;
    const auto m = quadrature_moments(constant_graphon(p), 4);
    for (std::size_t f = 0; f < kNumMotifs; ++f) {
        const auto& motif = kMotifCatalog[f];
        const int missing = motif.num_pairs() - motif.num_edges();
        CHECK(m[f] == doctest::Approx(std::pow(p, motif.num_edges()) * std::pow(1 - p, missing)));
    }
}

TEST_CASE("quadrature and MC moments agree for a smooth graphon") {
    const auto w = analytic_graphon(4);
    const auto q = quadrature_moments(w, 48);
    // Edge density of (x+y)/2 is 1/2; triangle hom density is a polynomial integral.
    CHECK(q[0] == doctest::Approx(0.5).epsilon(1e-9));
    const std::size_t L = 200000;
    const auto mc = mc_moments(w, L, 9);
    for (std::size_t f = 0; f < kNumMotifs; ++f) {
        const double se = std::sqrt(q[f] * (1 - q[f]) / L);
        CHECK(std::abs(mc[f] - q[f]) <= 4 * se + 1e-4);
    }
}
