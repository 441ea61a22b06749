#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "momentnet/graphon.hpp"
#include "momentnet/motif.hpp"

namespace momentnet {

struct MomentDistance {
    double l2 = 0;
    double linf = 0;
};

MomentDistance moment_distance(const MomentVector& a, const MomentVector& b);

/// Permutation that sorts grid indices by ascending row mean (ties by index).
std::vector<std::size_t> degree_order(const Grid& grid);

/// Mean squared difference after reordering each grid's rows and columns by
/// ascending degree. Throws DomainError on a resolution mismatch.
double aligned_mse(const Grid& a, const Grid& b);

enum class CentralityMeasure { Degree, Eigenvector, Katz, PageRank };

std::string_view to_string(CentralityMeasure m);
CentralityMeasure parse_centrality_measure(std::string_view name);

struct CentralityProfile {
    CentralityMeasure measure = CentralityMeasure::Degree;
    double param = 0;  // Katz attenuation or PageRank damping
    std::vector<double> xs;
    std::vector<double> raw;
    std::vector<double> normalized;  // unit Euclidean norm
};

std::vector<double> l2_normalized(std::span<const double> v);

/// Closed-form graphon centralities for the reference graphons 1 (xy) and 2
/// (exp(-(x^.7 + y^.7))).
CentralityProfile analytic_centrality(int graphon_id, CentralityMeasure measure, double param,
                                      std::span<const double> xs);

/// Centrality of the discretized kernel operator T = grid / R at cell centers.
CentralityProfile numeric_centrality(const Grid& grid, CentralityMeasure measure, double param);
CentralityProfile numeric_centrality(const Graphon& w, CentralityMeasure measure, double param,
                                     std::size_t resolution);

/// Largest eigenvalue of T = grid / R by power iteration.
double kernel_spectral_radius(const Grid& grid);

/// 1-D sortedness-aware comparison: max |a_sorted - b_sorted|. Profiles of an
/// estimate are only defined up to a measure-preserving relabeling of [0,1],
/// so comparing monotone rearrangements is the alignment-free check.
double rearranged_max_deviation(std::span<const double> a, std::span<const double> b);

struct Lemma1Bound {
    bool applicable = false;
    double value = 0;  // meaningful only when applicable
};

/// 2 exp(-(P n / (4 k^2)) (eps - k(k-1)/(2n))^2), applicable iff eps >= k(k-1)/(2n).
Lemma1Bound lemma1_bound(std::size_t graphs, std::size_t nodes, int k, double eps);

/// Number of non-isomorphic simple graphs on k vertices, k in [1, 5].
std::size_t graphs_on_k_vertices(int k);

struct TheoryBound {
    int k = 0;
    std::size_t graphs = 0;  // P
    std::size_t nodes = 0;   // n
    double zeta = 0;
    std::size_t num_graphs_k = 0;  // N_k
    double delta_m = 0;            // 3^(-k^2)
    double sup_norm = 1;           // C
    double eta_cut = 0;            // 22 C / sqrt(log2 k)
    double eps_s = 0;              // delta_m / 2
    double failure_probability = 0;
    double n_threshold = 0;  // k(k-1) / delta_m
    bool sample_size_ok = false;
    bool applies = false;
    bool vacuous = false;  // eta_cut >= 1: the cut-distance bound says nothing for graphons
};

/// Evaluates the sampling condition of the motif-to-cut-distance bound. k in [2, 5].
TheoryBound theorem_condition(std::size_t graphs, std::size_t nodes, int k, double zeta);

struct ConcentrationResult {
    double empirical_prob = 0;
    Lemma1Bound bound;
    double true_density = 0;
    std::size_t trials = 0;
};

/// Repeats: draw P graphs of size n from w, average the density of motif
/// `motif_index`, and record whether it deviates from t'(F, w) by at least eps.
/// t'(F, w) comes from quadrature_moments(w, quadrature_resolution).
ConcentrationResult simulate_concentration(const Graphon& w, std::size_t motif_index, std::size_t graphs,
                                           std::size_t nodes, double eps, std::size_t trials, std::uint64_t seed,
                                           unsigned jobs = 1, std::size_t quadrature_resolution = 48);

struct Prop1Gap {
    double mixed_graphon_density = 0;  // p_a^2 (1 - p_a), p_a = a p1 + (1 - a) p2
    double mixed_moment_density = 0;   // a p1^2 (1 - p1) + (1 - a) p2^2 (1 - p2)
};

/// Path-of-length-2 induced density under graphon-space vs moment-space mixing of two constant graphons.
Prop1Gap prop1_gap(double p1, double p2, double alpha);

}  // namespace momentnet
