#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "momentnet/graph.hpp"
#include "momentnet/motif.hpp"

namespace testing {

inline momentnet::Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<momentnet::Edge> edges;
    for (momentnet::Vertex u = 0; u < n; ++u) {
        for (momentnet::Vertex v = u + 1; v < n; ++v) {
            if (coin(rng)) edges.emplace_back(u, v);
        }
    }
    return momentnet::Graph(n, edges);
}

inline momentnet::Graph make_graph(std::size_t n, std::initializer_list<momentnet::Edge> edges) {
    std::vector<momentnet::Edge> e(edges);
    return momentnet::Graph(n, e);
}

// Dense adjacency matrix on k labeled vertices.
using SmallGraph = std::vector<std::vector<bool>>;

inline bool isomorphic(const SmallGraph& a, const SmallGraph& b) {
    const std::size_t k = a.size();
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool same = true;
        for (std::size_t i = 0; i < k && same; ++i) {
            for (std::size_t j = 0; j < k && same; ++j) same = a[i][j] == b[perm[i]][perm[j]];
        }
        if (same) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

inline SmallGraph motif_graph(const momentnet::Motif& m) {
    SmallGraph g(m.k, std::vector<bool>(m.k, false));
    for (int p = 0; p < 6; ++p) {
        const auto [i, j] = momentnet::kTuplePairs[p];
        if (i < m.k && j < m.k && m.has_pair(p)) g[i][j] = g[j][i] = true;
    }
    return g;
}

// Induced counts by permutation isomorphism against the catalog, independent of
// the library's classifiers.
inline momentnet::MotifCounts isomorphism_counts(const momentnet::Graph& g) {
    momentnet::MotifCounts counts{};
    const std::size_t n = g.num_vertices();
    std::vector<SmallGraph> motifs;
    for (const auto& m : momentnet::kMotifCatalog) motifs.push_back(motif_graph(m));
    auto classify = [&](const std::vector<momentnet::Vertex>& vs) {
        SmallGraph sub(vs.size(), std::vector<bool>(vs.size(), false));
        for (std::size_t i = 0; i < vs.size(); ++i) {
            for (std::size_t j = 0; j < vs.size(); ++j) sub[i][j] = i != j && g.has_edge(vs[i], vs[j]);
        }
        for (std::size_t f = 0; f < momentnet::kNumMotifs; ++f) {
            if (static_cast<std::size_t>(momentnet::kMotifCatalog[f].k) == vs.size() && isomorphic(sub, motifs[f])) {
                ++counts[f];
            }
        }
    };
    for (momentnet::Vertex a = 0; a < n; ++a) {
        for (momentnet::Vertex b = a + 1; b < n; ++b) {
            classify({a, b});
            for (momentnet::Vertex c = b + 1; c < n; ++c) {
                classify({a, b, c});
                for (momentnet::Vertex d = c + 1; d < n; ++d) classify({a, b, c, d});
            }
        }
    }
    return counts;
}

inline double choose(double n, int k) {
    double r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("momentnet_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace testing
