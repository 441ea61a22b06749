#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace momentnet {

class Graphon;

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph stored as sorted adjacency lists. Immutable after
/// construction; every constructor validates the invariants (no self-loops,
/// no duplicate edges, symmetric adjacency, indices in range).
class Graph {
public:
    Graph() = default;

    /// Builds a graph on `n` vertices from an unordered edge list.
    /// Throws ValidationError on self-loops, duplicates or out-of-range endpoints.
    Graph(std::size_t n, std::span<const Edge> edges);

    /// Takes adjacency lists directly; they are sorted and then validated.
    static Graph from_adjacency(std::vector<std::vector<Vertex>> adjacency);

    std::size_t num_vertices() const noexcept { return adjacency_.size(); }
    std::size_t num_edges() const noexcept { return num_edges_; }
    std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
    std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
    bool has_edge(Vertex u, Vertex v) const;

    /// Edges with u < v in lexicographic order.
    std::vector<Edge> edges() const;

    /// Re-checks every invariant; throws ValidationError on the first violation.
    void validate() const;

    double edge_density() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::vector<Vertex>> adjacency_;
    std::size_t num_edges_ = 0;
};

/// A graph drawn from a graphon together with the latent positions that produced it.
struct SampledGraph {
    Graph graph;
    std::vector<double> latents;
    std::uint64_t seed = 0;
};

/// Parses "u v" lines. Blank lines and '#' comments are skipped; an optional
/// "n <N>" line fixes the vertex count, otherwise n = 1 + max index seen.
Graph parse_edge_list(std::string_view text);

/// Canonical text form: "n <N>" followed by sorted "u v" lines (u < v), no trailing newline.
std::string write_edge_list(const Graph& g);

/// Draws n i.i.d. uniform latents and then one Bernoulli(w(eta_i, eta_j)) per
/// pair i < j in row-major order, all from SplitMix64(seed).
SampledGraph sample_graph(const Graphon& w, std::size_t n, std::uint64_t seed);

std::vector<double> parse_latents(std::string_view text);
std::string write_latents(std::span<const double> latents);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// A dataset directory: one ".edges" file per graph, optional sibling ".latents".
struct DatasetEntry {
    std::filesystem::path path;
    Graph graph;
    std::vector<double> latents;  // empty when no .latents file exists
};

/// Loads every ".edges" file in `dir`, sorted by filename. Parse failures are
/// rethrown with the offending filename in the message.
std::vector<DatasetEntry> load_dataset(const std::filesystem::path& dir);

}  // namespace momentnet
