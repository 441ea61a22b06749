#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "momentnet/motif.hpp"

namespace momentnet {

enum class Activation { Tanh, Sine };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view tag);

/// One-hidden-layer coordinate network f: [0,1]^2 -> (0,1).
///
/// Parameters live in one flat vector laid out as
///   [input weights (H x 2, row-major) | hidden biases (H) | output weights (H) | output bias]
/// so optimizers can treat them uniformly.
class InrParams {
public:
    InrParams(std::size_t hidden, Activation activation = Activation::Tanh, std::uint64_t seed = 0);

    static constexpr std::size_t parameter_count(std::size_t hidden) noexcept { return 4 * hidden + 1; }

    std::size_t hidden() const noexcept { return hidden_; }
    Activation activation() const noexcept { return activation_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    std::span<const double> input_weights() const noexcept { return {values_.data(), 2 * hidden_}; }
    std::span<const double> hidden_bias() const noexcept { return {values_.data() + 2 * hidden_, hidden_}; }
    std::span<const double> output_weights() const noexcept { return {values_.data() + 3 * hidden_, hidden_}; }
    double output_bias() const noexcept { return values_.back(); }

    friend bool operator==(const InrParams&, const InrParams&) = default;

private:
    std::size_t hidden_;
    Activation activation_;
    std::uint64_t seed_;
    std::vector<double> values_;
};

/// d(loss)/d(parameter), same flat layout as InrParams.
using GradVector = std::vector<double>;

/// Input weights ~ U(-1/sqrt(2), 1/sqrt(2)), output weights ~ U(-1/sqrt(H), 1/sqrt(H)),
/// biases zero. Draws come from SplitMix64(seed) in flat-layout order.
InrParams init_params(std::size_t hidden, std::uint64_t seed, Activation activation = Activation::Tanh);

/// sigmoid(w2 . act(W1 [min(x,y), max(x,y)] + b1) + b2). Throws DomainError outside [0,1]^2.
double forward(const InrParams& params, double x, double y);

/// Same as forward without the domain check.
double forward_unchecked(const InrParams& params, double x, double y) noexcept;

using Tuple4 = std::array<double, 4>;

/// Per-motif loss weights.
using MotifWeights = std::array<double, kNumMotifs>;

struct LossResult {
    double loss = 0;
    GradVector grad;
    MomentVector mhat;
};

/// Reusable scratch memory for loss_and_grad; holds the per-pair network outputs.
class LossWorkspace {
public:
    LossWorkspace() = default;

private:
    friend LossResult loss_and_grad(const InrParams&, std::span<const Tuple4>, const MomentVector&,
                                    const MotifWeights&, LossWorkspace*, unsigned);
    std::vector<double> outputs_;
};

/// Monte-Carlo motif densities of the network over `tuples`, the weighted squared
/// error sum_F w_F (target_F - mhat_F)^2 and its exact gradient.
///
/// All nine motifs share the six pair evaluations of each tuple; a motif on k
/// vertices uses the first k coordinates. Partial sums are formed over fixed
/// blocks of tuples and reduced in block order, so the result does not depend on `jobs`.
LossResult loss_and_grad(const InrParams& params, std::span<const Tuple4> tuples, const MomentVector& target,
                         const MotifWeights& weights, LossWorkspace* workspace = nullptr, unsigned jobs = 1);

/// Monte-Carlo densities only (no gradient).
MomentVector mc_moments(const InrParams& params, std::span<const Tuple4> tuples, unsigned jobs = 1);

/// L tuples of 4 coordinates; coordinate c of tuple l is SplitMix64::uniform_at(seed, 4 l + c).
std::vector<Tuple4> draw_tuples(std::size_t count, std::uint64_t seed);

/// Text model file: header lines (format, hidden, activation, seed, params) then one value per line.
std::string write_model(const InrParams& params);
InrParams parse_model(std::string_view text);

}  // namespace momentnet
