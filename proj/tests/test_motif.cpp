#include <doctest.h>

#include <json.hpp>

#include "momentnet/errors.hpp"
#include "momentnet/graphon.hpp"
#include "momentnet/motif.hpp"
#include "support.hpp"

using namespace momentnet;

namespace {

MotifCounts counts(std::initializer_list<std::uint64_t> v) {
    MotifCounts c{};
    std::copy(v.begin(), v.end(), c.begin());
    return c;
}

}  // namespace

TEST_CASE("catalog structure") {
    const std::array<int, 9> k{2, 3, 3, 4, 4, 4, 4, 4, 4};
    const std::array<int, 9> edges{1, 2, 3, 3, 3, 4, 4, 5, 6};
    const std::array<int, 9> copies{1, 3, 1, 12, 4, 3, 12, 6, 1};
    for (std::size_t f = 0; f < kNumMotifs; ++f) {
        CHECK(kMotifCatalog[f].k == k[f]);
        CHECK(kMotifCatalog[f].num_edges() == edges[f]);
        CHECK(kMotifCatalog[f].labeled_copies == copies[f]);
    }
    CHECK(motif_labels()[0] == "F0");
    CHECK(motif_labels()[8] == "F8");
}

TEST_CASE("labeled copies match enumeration of labeled graphs") {
    for (const auto& m : kMotifCatalog) {
        const auto target = testing::motif_graph(m);
        const int pairs = m.k * (m.k - 1) / 2;
        int matches = 0;
        for (int mask = 0; mask < (1 << pairs); ++mask) {
            testing::SmallGraph g(m.k, std::vector<bool>(m.k, false));
            int bit = 0;
            for (int i = 0; i < m.k; ++i) {
                for (int j = i + 1; j < m.k; ++j, ++bit) g[i][j] = g[j][i] = (mask >> bit) & 1;
            }
            if (testing::isomorphic(g, target)) ++matches;
        }
        INFO(m.name);
        CHECK(matches == m.labeled_copies);
        int factorial = 1;
        for (int i = 2; i <= m.k; ++i) factorial *= i;
        CHECK(factorial / m.automorphisms == m.labeled_copies);
    }
}

TEST_CASE("tuple_pair_index matches pair order") {
    for (int p = 0; p < 6; ++p) {
        const auto [i, j] = kTuplePairs[p];
        CHECK(tuple_pair_index(i, j) == p);
        CHECK(tuple_pair_index(j, i) == p);
    }
}

TEST_CASE("small graph counts") {
    const auto k4 = testing::make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK(count_induced(k4) == counts({6, 0, 4, 0, 0, 0, 0, 0, 1}));
    const auto path = testing::make_graph(3, {{0, 1}, {1, 2}});
    CHECK(count_induced(path) == counts({2, 1, 0, 0, 0, 0, 0, 0, 0}));
    const auto star = testing::make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(count_induced(star) == counts({3, 3, 0, 0, 1, 0, 0, 0, 0}));
    const auto c4 = testing::make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    CHECK(count_induced(c4) == counts({4, 4, 0, 0, 0, 1, 0, 0, 0}));
    CHECK(brute_force_counts(c4) == counts({4, 4, 0, 0, 0, 1, 0, 0, 0}));
    CHECK(brute_force_counts(Graph(10, {})) == MotifCounts{});
    CHECK(count_induced(Graph(10, {})) == MotifCounts{});
}

TEST_CASE("single 4-vertex motifs are counted exactly once") {
    for (std::size_t f = 3; f < kNumMotifs; ++f) {
        const auto& m = kMotifCatalog[f];
        std::vector<Edge> edges;
        for (int p = 0; p < 6; ++p) {
            if (m.has_pair(p)) edges.emplace_back(kTuplePairs[p].first, kTuplePairs[p].second);
        }
        const Graph g(4, edges);
        const auto c = count_induced(g);
        INFO(m.name);
        CHECK(c[f] == 1);
        for (std::size_t h = 3; h < kNumMotifs; ++h) {
            if (h != f) CHECK(c[h] == 0);
        }
    }
}

TEST_CASE("count_induced agrees with two independent oracles") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 4 + rng() % 13;
        const double p = 0.1 * (1 + rng() % 9);
        const auto g = testing::random_graph(n, p, rng);
        const auto fast = count_induced(g);
        CHECK(fast == brute_force_counts(g));
        if (n <= 12) CHECK(fast == testing::isomorphism_counts(g));
    }
}

TEST_CASE("brute force refuses large graphs") {
    CHECK_THROWS_AS(brute_force_counts(Graph(31, {})), DomainError);
}

TEST_CASE("densities_from_counts") {
    CHECK_THROWS_AS(densities_from_counts(counts({3, 0, 1}), 3), DomainError);
    const auto k4 = testing::make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    const auto dk4 = graph_moments(k4);
    CHECK(dk4[2] == 1.0);
    CHECK(dk4[8] == 1.0);
    CHECK(dk4[0] == 1.0);
    const auto star = testing::make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
    const auto ds = graph_moments(star);
    CHECK(ds[4] == doctest::Approx(0.25));
    CHECK(ds[0] == doctest::Approx(0.5));
    CHECK(ds.provenance.kind == Provenance::Kind::Empirical);
    CHECK_THROWS(densities_from_counts(counts({7, 0, 0, 0, 0, 0, 0, 0, 0}), 4));
}

TEST_CASE("densities of a random graph match the labeled-tuple fraction") {
    // Fraction of ordered injective k-tuples whose induced pattern equals the
    // catalog representative, counted directly.
    std::mt19937_64 rng(5);
    const auto g = testing::random_graph(9, 0.5, rng);
    const auto d = graph_moments(g);
    std::array<double, kNumMotifs> hits{};
    std::array<double, kNumMotifs> total{};
    const Vertex n = 9;
    for (Vertex a = 0; a < n; ++a) {
        for (Vertex b = 0; b < n; ++b) {
            for (Vertex c = 0; c < n; ++c) {
                for (Vertex e = 0; e < n; ++e) {
                    const std::array<Vertex, 4> t{a, b, c, e};
                    for (std::size_t f = 0; f < kNumMotifs; ++f) {
                        const auto& m = kMotifCatalog[f];
                        bool injective = true;
                        for (int i = 0; i < m.k; ++i) {
                            for (int j = i + 1; j < m.k; ++j) injective = injective && t[i] != t[j];
                        }
                        // each k-tuple is visited n^(4-k) times; weights cancel in the ratio
                        if (!injective) continue;
                        total[f] += 1;
                        bool match = true;
                        for (int i = 0; i < m.k; ++i) {
                            for (int j = i + 1; j < m.k; ++j) {
                                match = match && g.has_edge(t[i], t[j]) == m.has_pair(tuple_pair_index(i, j));
                            }
                        }
                        if (match) hits[f] += 1;
                    }
                }
            }
        }
    }
    for (std::size_t f = 0; f < kNumMotifs; ++f) {
        INFO("motif " << f);
        CHECK(d[f] == doctest::Approx(hits[f] / total[f]).epsilon(1e-12));
    }
}

TEST_CASE("average_moments") {
    MomentVector a, b;
    a.densities.fill(0.2);
    b.densities.fill(0.4);
    const std::vector<MomentVector> both{a, b};
    const auto avg = average_moments(both);
    for (double d : avg.densities) CHECK(d == doctest::Approx(0.3));
    CHECK(avg.provenance == Provenance::empirical(2));
    const std::vector<MomentVector> one{a};
    CHECK(average_moments(one).densities == a.densities);
    CHECK_THROWS(average_moments(std::span<const MomentVector>{}));
}

TEST_CASE("parallel census equals sequential census") {
    std::mt19937_64 rng(8);
    std::vector<Graph> graphs;
    for (int i = 0; i < 20; ++i) graphs.push_back(testing::random_graph(30 + i, 0.3, rng));
    const auto seq = census(graphs, 1);
    const auto par = census(graphs, 8);
    REQUIRE(seq.size() == par.size());
    for (std::size_t i = 0; i < seq.size(); ++i) CHECK(seq[i].densities == par[i].densities);
    CHECK(census_to_json(seq, average_moments(seq)) == census_to_json(par, average_moments(par)));
}

TEST_CASE("census rejects graphs below four vertices") {
    std::vector<Graph> graphs{testing::make_graph(3, {{0, 1}})};
    CHECK_THROWS(census(graphs, 1));
}

TEST_CASE("constant graphon closed form") {
    const auto m = constant_graphon_moments(0.3);
    CHECK(m[0] == doctest::Approx(0.3));
    CHECK(m[1] == doctest::Approx(0.3 * 0.3 * 0.7));
    CHECK(m[2] == doctest::Approx(0.027));
    CHECK(m[8] == doctest::Approx(std::pow(0.3, 6)));
    CHECK(m[5] == doctest::Approx(std::pow(0.3, 4) * 0.49));
}

TEST_CASE("tuple_motif_values at constant pair values") {
    std::array<double, 6> f;
    f.fill(0.5);
    const auto v = tuple_motif_values(f);
    CHECK(v[0] == 0.5);
    CHECK(v[2] == 0.125);
    CHECK(v[8] == 0.015625);
    f = {1, 0, 0, 1, 0, 1};  // path 0-1-2-3
    const auto path = tuple_motif_values(f);
    CHECK(path[3] == 1.0);
    CHECK(path[1] == 1.0);
    CHECK(path[5] == 0.0);
}

TEST_CASE("census JSON round trip") {
    const auto m = constant_graphon_moments(0.4);
    const std::vector<MomentVector> per{m, m};
    const std::vector<std::string> names{"a.edges", "b.edges"};
    const auto text = census_to_json(per, average_moments(per), names);
    const auto j = nlohmann::json::parse(text);
    CHECK(j["motifs"].size() == 9);
    CHECK(j["num_graphs"] == 2);
    CHECK(j["per_graph"].size() == 2);
    CHECK(j["graphs"][1] == "b.edges");
    const auto back = moments_from_json(text);
    for (std::size_t f = 0; f < kNumMotifs; ++f) CHECK(back[f] == m[f]);
    CHECK(back.provenance == Provenance::empirical(2));
    CHECK(moments_from_json("[0.5,0,0,0,0,0,0,0,0]")[0] == 0.5);
    CHECK_THROWS(moments_from_json("[0.5,0]"));
    CHECK_THROWS(moments_from_json("{\"x\": 1}"));
    CHECK_THROWS(moments_from_json("[2,0,0,0,0,0,0,0,0]"));
}
