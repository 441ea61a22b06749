#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "momentnet/graph.hpp"
#include "momentnet/motif.hpp"
#include "momentnet/trainer.hpp"

namespace momentnet {

struct MixupConfig {
    double alpha = 0.5;
    std::size_t n_sample = 1;  // graphs drawn from each class for the average
    std::size_t n_nodes = 100;
    std::size_t n_graphs = 0;
    std::size_t label_i = 0;
    std::size_t label_j = 1;
    TrainConfig trainer{};
    std::uint64_t seed = 0;
    unsigned jobs = 1;

    void validate() const;
};

struct AugmentedSample {
    Graph graph;
    std::vector<double> soft_label;
    std::uint64_t seed = 0;
};

struct MixupResult {
    std::vector<AugmentedSample> samples;
    InrParams model;
    TrainReport report;
    MomentVector class_i_moments;
    MomentVector class_j_moments;
    MomentVector target;
    std::vector<std::size_t> chosen_i;
    std::vector<std::size_t> chosen_j;
};

/// alpha * a + (1 - alpha) * b; provenance = mixed(alpha).
MomentVector mix_moments(const MomentVector& a, const MomentVector& b, double alpha);

/// Probability vector over max(label_i, label_j) + 1 classes: alpha on label_i, 1 - alpha on label_j.
std::vector<double> soft_label(std::size_t label_i, std::size_t label_j, double alpha);

/// Picks `count` distinct indices from [0, population) with a seeded partial Fisher-Yates shuffle.
std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count, std::uint64_t seed);

/// Mixes the class-average moments, fits a network to the mix and samples
/// labeled graphs from it.
MixupResult augment(std::span<const Graph> class_a, std::span<const Graph> class_b, const MixupConfig& cfg);

}  // namespace momentnet
