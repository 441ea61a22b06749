#include <doctest.h>

#include <map>
#include <set>

#include "momentnet/errors.hpp"
#include "momentnet/eval.hpp"
#include "momentnet/graphon.hpp"
#include "support.hpp"

using namespace momentnet;

namespace {

std::vector<double> centers(std::size_t r) {
    std::vector<double> xs(r);
    for (std::size_t i = 0; i < r; ++i) xs[i] = (i + 0.5) / static_cast<double>(r);
    return xs;
}

double max_dev(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Composite Simpson rule on [0,1].
template <typename F>
double simpson(F f, int intervals = 200000) {
    const double h = 1.0 / intervals;
    double s = f(0.0) + f(1.0);
    for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("moment_distance") {
    MomentVector a = constant_graphon_moments(0.3);
    auto d = moment_distance(a, a);
    CHECK(d.l2 == 0.0);
    CHECK(d.linf == 0.0);
    MomentVector b = a;
    b[0] += 0.1;
    d = moment_distance(a, b);
    CHECK(d.l2 == doctest::Approx(0.1));
    CHECK(d.linf == doctest::Approx(0.1));
}

TEST_CASE("aligned_mse") {
    const auto g = discretize(analytic_graphon(3), 5);
    CHECK(aligned_mse(g, g) == 0.0);

    const std::vector<std::size_t> perm{3, 0, 4, 1, 2};
    std::vector<double> shuffled(25);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) shuffled[i * 5 + j] = g(perm[i], perm[j]);
    }
    CHECK(aligned_mse(g, Grid(5, shuffled)) == 0.0);

    CHECK(aligned_mse(discretize(constant_graphon(0.2), 4), discretize(constant_graphon(0.3), 4)) ==
          doctest::Approx(0.01));
    CHECK_THROWS_AS(aligned_mse(discretize(constant_graphon(0.2), 4), discretize(constant_graphon(0.2), 5)),
                    DomainError);
}

TEST_CASE("degree_order is ascending and stable") {
    const auto g = discretize(analytic_graphon(10), 6);  // |x - y|: symmetric degrees
    const auto order = degree_order(g);
    const auto deg = g.row_means();
    for (std::size_t i = 1; i < order.size(); ++i) {
        CHECK(deg[order[i - 1]] <= deg[order[i]]);
        if (deg[order[i - 1]] == deg[order[i]]) CHECK(order[i - 1] < order[i]);
    }
}

TEST_CASE("analytic centralities of graphon 1") {
    const std::vector<double> one{1.0};
    CHECK(analytic_centrality(1, CentralityMeasure::Degree, 0, one).raw[0] == doctest::Approx(0.5));
    CHECK(analytic_centrality(1, CentralityMeasure::Eigenvector, 0, one).raw[0] == doctest::Approx(1.7320508));
    const std::vector<double> half{0.5};
    CHECK(analytic_centrality(1, CentralityMeasure::PageRank, 0.85, half).raw[0] == doctest::Approx(1.0));
    CHECK(analytic_centrality(1, CentralityMeasure::Katz, 0.5, half).raw[0] == doctest::Approx(5.0 + 0.75));
    CHECK_THROWS_AS(analytic_centrality(3, CentralityMeasure::Degree, 0, one), DomainError);

    const auto p = analytic_centrality(1, CentralityMeasure::Degree, 0, centers(10));
    double sq = 0;
    for (double v : p.normalized) sq += v * v;
    CHECK(sq == doctest::Approx(1.0));
}

TEST_CASE("analytic centralities of graphon 2 use exact kernel integrals") {
    const auto g = [](double x) { return std::exp(-std::pow(x, 0.7)); };
    const double i1 = simpson(g);
    const double i2 = simpson([&](double x) { return g(x) * g(x); });
    const std::vector<double> xs{0.0, 0.3, 1.0};
    const auto deg = analytic_centrality(2, CentralityMeasure::Degree, 0, xs);
    const auto eig = analytic_centrality(2, CentralityMeasure::Eigenvector, 0, xs);
    const auto katz = analytic_centrality(2, CentralityMeasure::Katz, 0.5, xs);
    const auto pr = analytic_centrality(2, CentralityMeasure::PageRank, 0.85, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(deg.raw[i] == doctest::Approx(i1 * g(xs[i])).epsilon(1e-8));
        CHECK(eig.raw[i] == doctest::Approx(g(xs[i]) / std::sqrt(i2)).epsilon(1e-8));
        CHECK(katz.raw[i] == doctest::Approx(1 + 0.5 * i1 * g(xs[i]) / (1 - 0.5 * i2)).epsilon(1e-8));
        CHECK(pr.raw[i] == doctest::Approx(0.15 + 0.85 * g(xs[i]) / i1).epsilon(1e-8));
    }
}

TEST_CASE("numeric centrality of constant graphons is flat") {
    for (auto m : {CentralityMeasure::Degree, CentralityMeasure::Eigenvector, CentralityMeasure::Katz,
                   CentralityMeasure::PageRank}) {
        const auto p = numeric_centrality(constant_graphon(0.4), m, m == CentralityMeasure::Katz ? 0.5 : 0.85, 20);
        for (double v : p.normalized) CHECK(v == doctest::Approx(1 / std::sqrt(20.0)));
    }
}

TEST_CASE("numeric centrality converges to the analytic profiles") {
    const std::vector<std::pair<CentralityMeasure, double>> cases{{CentralityMeasure::Degree, 0},
                                                                  {CentralityMeasure::Eigenvector, 0},
                                                                  {CentralityMeasure::Katz, 0.5},
                                                                  {CentralityMeasure::PageRank, 0.85}};
    for (int id : {1, 2}) {
        for (auto [m, param] : cases) {
            INFO("graphon " << id << " measure " << to_string(m));
            const auto coarse = numeric_centrality(analytic_graphon(id), m, param, 125);
            const auto fine = numeric_centrality(analytic_graphon(id), m, param, 500);
            const double dc = max_dev(coarse.normalized, analytic_centrality(id, m, param, coarse.xs).normalized);
            const double df = max_dev(fine.normalized, analytic_centrality(id, m, param, fine.xs).normalized);
            CHECK(df <= 0.01);
            CHECK(df <= dc / 2 + 1e-12);
        }
    }
}

TEST_CASE("Katz requires a convergent series") {
    const auto g = discretize(constant_graphon(0.5), 10);
    CHECK(kernel_spectral_radius(g) == doctest::Approx(0.5));
    CHECK_THROWS_AS(numeric_centrality(g, CentralityMeasure::Katz, 2.5), NumericalError);
    CHECK_NOTHROW(numeric_centrality(g, CentralityMeasure::Katz, 1.9));
    CHECK_THROWS_AS(numeric_centrality(g, CentralityMeasure::PageRank, 1.0), DomainError);
    CHECK(parse_centrality_measure("katz") == CentralityMeasure::Katz);
    CHECK_THROWS(parse_centrality_measure("closeness"));
}

TEST_CASE("rearranged deviation ignores orientation") {
    const std::vector<double> a{0.1, 0.2, 0.3};
    const std::vector<double> b{0.3, 0.2, 0.1};
    CHECK(rearranged_max_deviation(a, b) == 0.0);
    const std::vector<double> c{0.1, 0.25, 0.3};
    CHECK(rearranged_max_deviation(a, c) == doctest::Approx(0.05));
}

TEST_CASE("lemma 1 bound") {
    const auto b = lemma1_bound(50, 200, 2, 0.2);
    REQUIRE(b.applicable);
    CHECK(b.value == doctest::Approx(2 * std::exp(-625 * 0.195 * 0.195)).epsilon(1e-14));
    CHECK(b.value == doctest::Approx(9.6e-11).epsilon(0.01));
    const auto edge = lemma1_bound(50, 200, 2, 2.0 / 400.0);
    CHECK(edge.applicable);
    CHECK(edge.value == 2.0);
    CHECK_FALSE(lemma1_bound(50, 200, 2, 0.001).applicable);
}

TEST_CASE("graph counts match enumeration up to isomorphism") {
    for (int k = 1; k <= 5; ++k) {
        const int pairs = k * (k - 1) / 2;
        std::vector<testing::SmallGraph> reps;
        for (int mask = 0; mask < (1 << pairs); ++mask) {
            testing::SmallGraph g(k, std::vector<bool>(k, false));
            int bit = 0;
            for (int i = 0; i < k; ++i) {
                for (int j = i + 1; j < k; ++j, ++bit) g[i][j] = g[j][i] = (mask >> bit) & 1;
            }
            bool seen = false;
            for (const auto& r : reps) {
                if (testing::isomorphic(g, r)) {
                    seen = true;
                    break;
                }
            }
            if (!seen) reps.push_back(g);
        }
        CHECK(graphs_on_k_vertices(k) == reps.size());
    }
    CHECK_THROWS(graphs_on_k_vertices(6));
}

TEST_CASE("theorem condition at k = 3") {
    const auto t = theorem_condition(50, 200, 3, 0.05);
    const long double delta = 1.0L / 19683.0L;
    CHECK(t.delta_m == doctest::Approx(static_cast<double>(delta)).epsilon(1e-15));
    CHECK(t.n_threshold == 118098.0);
    CHECK(t.eta_cut == doctest::Approx(static_cast<double>(22.0L / std::sqrt(std::log2(3.0L)))).epsilon(1e-15));
    CHECK(t.eta_cut == doctest::Approx(17.47).epsilon(1e-3));
    CHECK(t.vacuous);
    CHECK_FALSE(t.sample_size_ok);
    CHECK_FALSE(t.applies);
    CHECK(t.num_graphs_k == 4);
    CHECK(t.eps_s == doctest::Approx(static_cast<double>(delta / 2)));
    CHECK_THROWS_AS(theorem_condition(50, 200, 1, 0.05), DomainError);
    CHECK_THROWS_AS(theorem_condition(50, 200, 6, 0.05), DomainError);
    CHECK_THROWS_AS(theorem_condition(50, 200, 3, 1.5), DomainError);
    CHECK(theorem_condition(1, 1, 2, 0.5).eta_cut == doctest::Approx(22.0));
}

TEST_CASE("concentration simulation") {
    const auto flat = simulate_concentration(constant_graphon(1.0), 2, 3, 20, 0.2, 10, 1);
    CHECK(flat.empirical_prob == 0.0);
    CHECK(flat.true_density == doctest::Approx(1.0));

    const auto er = simulate_concentration(constant_graphon(0.5), 0, 50, 200, 0.2, 20, 2);
    CHECK(er.empirical_prob == 0.0);
    CHECK(er.bound.value == doctest::Approx(9.6e-11).epsilon(0.01));
    CHECK(er.trials == 20);

    const auto a = simulate_concentration(analytic_graphon(4), 1, 2, 30, 0.12, 40, 9, 1);
    const auto b = simulate_concentration(analytic_graphon(4), 1, 2, 30, 0.12, 40, 9, 4);
    CHECK(a.empirical_prob == b.empirical_prob);
    CHECK_THROWS_AS(simulate_concentration(constant_graphon(0.5), 0, 5, 20, 0.01, 5, 1), DomainError);
}

TEST_CASE("proposition 1 gap") {
    const auto g = prop1_gap(0.2, 0.8, 0.5);
    CHECK(g.mixed_graphon_density == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(g.mixed_moment_density == doctest::Approx(0.08).epsilon(1e-15));
    const auto same = prop1_gap(0.4, 0.4, 0.3);
    CHECK(same.mixed_graphon_density == doctest::Approx(same.mixed_moment_density));
    const auto end = prop1_gap(0.3, 0.9, 1.0);
    CHECK(end.mixed_graphon_density == doctest::Approx(0.09 * 0.7));
    CHECK(end.mixed_moment_density == doctest::Approx(0.09 * 0.7));
    // p^2 (1 - p) is cubic, so the two mixes can coincide off the diagonal:
    // (0.1, 0.5, 0.25) is such a root.
    const auto root = prop1_gap(0.1, 0.5, 0.25);
    CHECK(root.mixed_graphon_density == doctest::Approx(0.096).epsilon(1e-12));
    CHECK(root.mixed_moment_density == doctest::Approx(0.096).epsilon(1e-12));
    for (double p1 : {0.1, 0.3, 0.6}) {
        for (double p2 : {0.2, 0.5, 0.9}) {
            for (double a : {0.25, 0.5, 0.75}) {
                if (p1 == 0.1 && p2 == 0.5 && a == 0.25) continue;
                const auto r = prop1_gap(p1, p2, a);
                CHECK(r.mixed_graphon_density != doctest::Approx(r.mixed_moment_density).epsilon(1e-9));
            }
        }
    }
}
