#include "momentnet/motif.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "momentnet/errors.hpp"
#include "momentnet/parallel.hpp"

namespace momentnet {

std::array<std::string, kNumMotifs> motif_labels() {
    std::array<std::string, kNumMotifs> out;
    for (std::size_t i = 0; i < kNumMotifs; ++i) out[i] = "F" + std::to_string(i);
    return out;
}

std::string to_string(Provenance p) {
    switch (p.kind) {
        case Provenance::Kind::Empirical: return "empirical(P=" + std::to_string(std::size_t(p.value)) + ")";
        case Provenance::Kind::Model: return "model(L=" + std::to_string(std::size_t(p.value)) + ")";
        case Provenance::Kind::Mixed: return "mixed(alpha=" + std::to_string(p.value) + ")";
        case Provenance::Kind::Exact: return "exact(R=" + std::to_string(std::size_t(p.value)) + ")";
    }
    return "unknown";
}

namespace {

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Non-induced (subgraph) counts, then induced counts by inclusion-exclusion.
struct SubgraphCounts {
    std::int64_t edges = 0, path3 = 0, triangles = 0, path4 = 0, stars = 0, cycles4 = 0, paws = 0,
                 diamonds = 0, cliques4 = 0;
};

SubgraphCounts subgraph_counts(const Graph& g) {
    const std::size_t n = g.num_vertices();
    SubgraphCounts s;
    s.edges = static_cast<std::int64_t>(g.num_edges());

    std::vector<std::int64_t> deg(n);
    for (Vertex v = 0; v < n; ++v) {
        deg[v] = static_cast<std::int64_t>(g.degree(v));
        s.path3 += deg[v] * (deg[v] - 1) / 2;
        s.stars += deg[v] * (deg[v] - 1) * (deg[v] - 2) / 6;
    }

    std::vector<std::int64_t> vertex_triangles(n, 0);
    std::vector<std::uint8_t> mark(n, 0);
    std::vector<std::uint8_t> upper_mark(n, 0);
    std::vector<Vertex> common;
    std::int64_t triangle_incidences = 0;

    for (Vertex u = 0; u < n; ++u) {
        const auto nu = g.neighbors(u);
        for (Vertex w : nu) mark[w] = 1;
        for (Vertex v : nu) {
            if (v <= u) continue;
            // Common neighbors of the edge (u, v).
            common.clear();
            for (Vertex w : g.neighbors(v)) {
                if (mark[w]) common.push_back(w);
            }
            const auto t = static_cast<std::int64_t>(common.size());
            triangle_incidences += t;
            vertex_triangles[u] += t;
            vertex_triangles[v] += t;
            s.diamonds += t * (t - 1) / 2;
            s.path4 += (deg[u] - 1) * (deg[v] - 1);

            // 4-cliques u < v < w < x: each counted once from its two smallest vertices.
            for (Vertex w : common) {
                if (w > v) upper_mark[w] = 1;
            }
            for (Vertex w : common) {
                if (w <= v) continue;
                const auto nw = g.neighbors(w);
                for (auto it = std::upper_bound(nw.begin(), nw.end(), w); it != nw.end(); ++it) {
                    if (upper_mark[*it]) ++s.cliques4;
                }
            }
            for (Vertex w : common) upper_mark[w] = 0;
        }
        for (Vertex w : nu) mark[w] = 0;
    }
    s.triangles = triangle_incidences / 3;
    s.path4 -= 3 * s.triangles;
    for (Vertex v = 0; v < n; ++v) {
        // each triangle at v was seen from both of its edges incident to v
        s.paws += (vertex_triangles[v] / 2) * (deg[v] - 2);
    }

    // 4-cycles: sum over vertex pairs u < w of C(codeg(u, w), 2) counts each cycle twice.
    std::vector<std::int64_t> codeg(n, 0);
    std::vector<Vertex> touched;
    std::int64_t cycle_pairs = 0;
    for (Vertex u = 0; u < n; ++u) {
        touched.clear();
        for (Vertex v : g.neighbors(u)) {
            for (Vertex w : g.neighbors(v)) {
                if (w <= u) continue;
                if (codeg[w]++ == 0) touched.push_back(w);
            }
        }
        for (Vertex w : touched) {
            cycle_pairs += codeg[w] * (codeg[w] - 1) / 2;
            codeg[w] = 0;
        }
    }
    s.cycles4 = cycle_pairs / 2;
    return s;
}

}  // namespace

MotifCounts count_induced(const Graph& g) {
    const auto s = subgraph_counts(g);
    const std::int64_t k4 = s.cliques4;
    const std::int64_t diamond = s.diamonds - 6 * k4;
    const std::int64_t paw = s.paws - 4 * diamond - 12 * k4;
    const std::int64_t c4 = s.cycles4 - diamond - 3 * k4;
    const std::int64_t star = s.stars - paw - 2 * diamond - 4 * k4;
    const std::int64_t p4 = s.path4 - 4 * c4 - 2 * paw - 6 * diamond - 12 * k4;
    const std::int64_t tri = s.triangles;
    const std::int64_t p3 = s.path3 - 3 * tri;

    const std::array<std::int64_t, kNumMotifs> induced{s.edges, p3, tri, p4, star, c4, paw, diamond, k4};
    MotifCounts out{};
    for (std::size_t i = 0; i < kNumMotifs; ++i) {
        if (induced[i] < 0) throw NumericalError("negative induced count for F" + std::to_string(i));
        out[i] = static_cast<std::uint64_t>(induced[i]);
    }
    return out;
}

MotifCounts brute_force_counts(const Graph& g) {
    const std::size_t n = g.num_vertices();
    if (n > 30) throw DomainError("brute_force_counts refuses graphs with more than 30 vertices");
    MotifCounts out{};
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = true;

    out[0] = g.num_edges();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            for (std::size_t c = b + 1; c < n; ++c) {
                const int e = adj[a][b] + adj[a][c] + adj[b][c];
                if (e == 2) ++out[1];
                if (e == 3) ++out[2];
                for (std::size_t d = c + 1; d < n; ++d) {
                    const std::array<std::size_t, 4> vs{a, b, c, d};
                    std::array<int, 4> degs{};
                    int edges = 0;
                    for (int i = 0; i < 4; ++i) {
                        for (int j = i + 1; j < 4; ++j) {
                            if (adj[vs[i]][vs[j]]) {
                                ++edges;
                                ++degs[i];
                                ++degs[j];
                            }
                        }
                    }
                    std::sort(degs.begin(), degs.end());
                    using D = std::array<int, 4>;
                    if (edges == 3 && degs == D{1, 1, 2, 2}) ++out[3];
                    else if (edges == 3 && degs == D{1, 1, 1, 3}) ++out[4];
                    else if (edges == 4 && degs == D{2, 2, 2, 2}) ++out[5];
                    else if (edges == 4 && degs == D{1, 2, 2, 3}) ++out[6];
                    else if (edges == 5) ++out[7];
                    else if (edges == 6) ++out[8];
                }
            }
        }
    }
    return out;
}

MomentVector densities_from_counts(const MotifCounts& counts, std::size_t n) {
    if (n < 4) throw DomainError("motif densities need at least 4 vertices, got " + std::to_string(n));
    MomentVector m;
    for (std::size_t i = 0; i < kNumMotifs; ++i) {
        const auto& motif = kMotifCatalog[i];
        const double placements = static_cast<double>(choose(n, motif.k)) * motif.labeled_copies;
        m[i] = static_cast<double>(counts[i]) / placements;
        if (!(m[i] >= 0.0 && m[i] <= 1.0)) {
            throw NumericalError("density of F" + std::to_string(i) + " outside [0,1]: count " +
                                 std::to_string(counts[i]) + " inconsistent with n = " + std::to_string(n));
        }
    }
    m.provenance = Provenance::empirical(1);
    return m;
}

MomentVector average_moments(std::span<const MomentVector> vectors) {
    if (vectors.empty()) throw DomainError("cannot average an empty list of moment vectors");
    MomentVector out;
    for (const auto& v : vectors) {
        for (std::size_t i = 0; i < kNumMotifs; ++i) out[i] += v[i];
    }
    for (auto& d : out.densities) d /= static_cast<double>(vectors.size());
    out.provenance = Provenance::empirical(vectors.size());
    return out;
}

MomentVector graph_moments(const Graph& g) { return densities_from_counts(count_induced(g), g.num_vertices()); }

std::vector<MomentVector> census(std::span<const Graph> graphs, unsigned jobs) {
    std::vector<MomentVector> out(graphs.size());
    parallel_for(graphs.size(), jobs, [&](std::size_t i) { out[i] = graph_moments(graphs[i]); });
    return out;
}

MomentVector constant_graphon_moments(double p) {
    MomentVector m;
    for (std::size_t i = 0; i < kNumMotifs; ++i) {
        const auto& motif = kMotifCatalog[i];
        const int edges = motif.num_edges();
        m[i] = std::pow(p, edges) * std::pow(1.0 - p, motif.num_pairs() - edges);
    }
    m.provenance = Provenance::exact();
    return m;
}

std::array<double, kNumMotifs> tuple_motif_values(const std::array<double, 6>& f) noexcept {
    std::array<double, kNumMotifs> out{};
    for (std::size_t i = 0; i < kNumMotifs; ++i) {
        const auto& motif = kMotifCatalog[i];
        double prod = 1.0;
        for (int p = 0; p < 6; ++p) {
            const auto [a, b] = kTuplePairs[p];
            if (b >= motif.k) continue;
            prod *= motif.has_pair(p) ? f[p] : 1.0 - f[p];
        }
        out[i] = prod;
    }
    return out;
}

std::string census_to_json(std::span<const MomentVector> per_graph, const MomentVector& average,
                           std::span<const std::string> names) {
    nlohmann::ordered_json j;
    j["motifs"] = motif_labels();
    j["motif_names"] = nlohmann::json::array();
    for (const auto& m : kMotifCatalog) j["motif_names"].push_back(std::string(m.name));
    if (!names.empty()) j["graphs"] = std::vector<std::string>(names.begin(), names.end());
    auto rows = nlohmann::json::array();
    for (const auto& v : per_graph) rows.push_back(v.densities);
    j["per_graph"] = rows;
    j["average"] = average.densities;
    j["num_graphs"] = per_graph.size();
    return j.dump(2) + "\n";
}

MomentVector moments_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, std::string("invalid moments JSON: ") + e.what());
    }
    const nlohmann::json* arr = &j;
    if (j.is_object()) {
        if (!j.contains("average")) throw ParseError(0, "moments JSON has no 'average' field");
        arr = &j["average"];
    }
    if (!arr->is_array() || arr->size() != kNumMotifs) {
        throw ParseError(0, "moment vector must have exactly 9 entries");
    }
    MomentVector m;
    for (std::size_t i = 0; i < kNumMotifs; ++i) {
        const auto& v = (*arr)[i];
        if (!v.is_number()) throw ParseError(0, "moment entries must be numbers");
        m[i] = v.get<double>();
        if (!(m[i] >= 0.0 && m[i] <= 1.0)) throw ValidationError("moment density outside [0,1]");
    }
    if (j.is_object() && j.contains("num_graphs")) {
        m.provenance = Provenance::empirical(j["num_graphs"].get<std::size_t>());
    } else {
        m.provenance = Provenance::empirical(1);
    }
    return m;
}

}  // namespace momentnet
