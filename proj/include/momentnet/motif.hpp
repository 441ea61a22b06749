#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "momentnet/graph.hpp"

namespace momentnet {

inline constexpr std::size_t kNumMotifs = 9;

/// Vertex pairs of a 4-tuple, in the order used for per-tuple pair values.
inline constexpr std::array<std::pair<int, int>, 6> kTuplePairs{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

constexpr int tuple_pair_index(int i, int j) noexcept {
    if (i > j) std::swap(i, j);
    // 01 02 03 12 13 23
    return i == 0 ? j - 1 : (i == 1 ? j + 1 : 5);
}

struct Motif {
    std::string_view name;
    int k;
    std::uint8_t edge_mask;  // bit p set iff tuple pair p (kTuplePairs) is an edge
    int automorphisms;
    int labeled_copies;  // k! / |Aut|

    constexpr int num_edges() const noexcept { return __builtin_popcount(edge_mask); }
    constexpr bool has_pair(int p) const noexcept { return (edge_mask >> p) & 1u; }
    constexpr int num_pairs() const noexcept { return k * (k - 1) / 2; }
};

namespace detail {
constexpr std::uint8_t mask(std::initializer_list<std::pair<int, int>> edges) {
    std::uint8_t m = 0;
    for (auto [i, j] : edges) m |= static_cast<std::uint8_t>(1u << tuple_pair_index(i, j));
    return m;
}
}  // namespace detail

/// F0..F8: edge, P3, triangle, P4, star K1,3, C4, paw, diamond, K4.
/// Each motif is one labeled representative on vertices {0..k-1}.
inline constexpr std::array<Motif, kNumMotifs> kMotifCatalog{{
    {"edge", 2, detail::mask({{0, 1}}), 2, 1},
    {"path3", 3, detail::mask({{0, 1}, {1, 2}}), 2, 3},
    {"triangle", 3, detail::mask({{0, 1}, {0, 2}, {1, 2}}), 6, 1},
    {"path4", 4, detail::mask({{0, 1}, {1, 2}, {2, 3}}), 2, 12},
    {"star3", 4, detail::mask({{0, 1}, {0, 2}, {0, 3}}), 6, 4},
    {"cycle4", 4, detail::mask({{0, 1}, {1, 2}, {2, 3}, {0, 3}}), 8, 3},
    {"paw", 4, detail::mask({{0, 1}, {0, 2}, {1, 2}, {2, 3}}), 2, 12},
    {"diamond", 4, detail::mask({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}), 4, 6},
    {"clique4", 4, detail::mask({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}), 24, 1},
}};

/// Catalog labels "F0".."F8".
std::array<std::string, kNumMotifs> motif_labels();

using MotifCounts = std::array<std::uint64_t, kNumMotifs>;

/// Where a moment vector came from.
struct Provenance {
    enum class Kind { Empirical, Model, Mixed, Exact };
    Kind kind = Kind::Exact;
    double value = 0;  // P graphs, L samples, alpha, or quadrature resolution (0 = closed form)

    static Provenance empirical(std::size_t graphs) { return {Kind::Empirical, double(graphs)}; }
    static Provenance model(std::size_t samples) { return {Kind::Model, double(samples)}; }
    static Provenance mixed(double alpha) { return {Kind::Mixed, alpha}; }
    static Provenance exact(std::size_t resolution = 0) { return {Kind::Exact, double(resolution)}; }

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

std::string to_string(Provenance p);

/// Induced motif densities in catalog order, each in [0, 1].
struct MomentVector {
    std::array<double, kNumMotifs> densities{};
    Provenance provenance{};

    double operator[](std::size_t i) const { return densities[i]; }
    double& operator[](std::size_t i) { return densities[i]; }
};

/// Exact unlabeled induced counts via edge iteration and inclusion-exclusion.
MotifCounts count_induced(const Graph& g);

/// Exhaustive enumeration of all 2-, 3- and 4-subsets; refuses n > 30.
MotifCounts brute_force_counts(const Graph& g);

/// density[F] = counts[F] / (C(n, k_F) * c_F). Requires n >= 4.
MomentVector densities_from_counts(const MotifCounts& counts, std::size_t n);

/// Elementwise mean; provenance = empirical(P).
MomentVector average_moments(std::span<const MomentVector> vectors);

/// count_induced + densities_from_counts.
MomentVector graph_moments(const Graph& g);

/// Per-graph moments computed on up to `jobs` threads, returned in input order.
std::vector<MomentVector> census(std::span<const Graph> graphs, unsigned jobs);

/// t'(F, W) for the constant graphon p: p^|E_F| (1-p)^(C(k,2) - |E_F|).
MomentVector constant_graphon_moments(double p);

/// Per-motif products for one 4-tuple given its six pair values f (kTuplePairs order):
/// prod over edges of f, times prod over non-edges of (1 - f), restricted to the
/// first k_F tuple coordinates.
std::array<double, kNumMotifs> tuple_motif_values(const std::array<double, 6>& f) noexcept;

/// Census file: {motifs, per_graph, average, num_graphs}.
std::string census_to_json(std::span<const MomentVector> per_graph, const MomentVector& average,
                           std::span<const std::string> names = {});

/// Reads the "average" vector of a census file (or a bare 9-element array).
MomentVector moments_from_json(std::string_view text);

}  // namespace momentnet
