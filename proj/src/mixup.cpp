#include "momentnet/mixup.hpp"

#include <numeric>

#include "momentnet/errors.hpp"
#include "momentnet/graphon.hpp"
#include "momentnet/parallel.hpp"
#include "momentnet/rng.hpp"

namespace momentnet {

namespace {
constexpr std::uint64_t kSelectA = 11;
constexpr std::uint64_t kSelectB = 12;
constexpr std::uint64_t kTrainer = 13;
constexpr std::uint64_t kSampleBase = 1000;
}  // namespace

void MixupConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0,1]");
    if (n_sample < 1) throw ValidationError("n_sample must be at least 1");
    if (n_nodes < 4) throw ValidationError("n_nodes must be at least 4");
    trainer.validate();
}

MomentVector mix_moments(const MomentVector& a, const MomentVector& b, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");
    MomentVector out;
    for (std::size_t i = 0; i < kNumMotifs; ++i) out[i] = alpha * a[i] + (1.0 - alpha) * b[i];
    out.provenance = Provenance::mixed(alpha);
    return out;
}

std::vector<double> soft_label(std::size_t label_i, std::size_t label_j, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");
    std::vector<double> out(std::max(label_i, label_j) + 1, 0.0);
    out[label_i] += alpha;
    out[label_j] += 1.0 - alpha;
    return out;
}

std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count, std::uint64_t seed) {
    if (count > population) throw DomainError("cannot draw more items than the population holds");
    std::vector<std::size_t> idx(population);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t span = population - i;
        // multiply-shift maps a 64-bit draw onto [0, span)
        const auto r = static_cast<std::size_t>((static_cast<unsigned __int128>(rng.next()) * span) >> 64);
        std::swap(idx[i], idx[i + r]);
    }
    idx.resize(count);
    return idx;
}

MixupResult augment(std::span<const Graph> class_a, std::span<const Graph> class_b, const MixupConfig& cfg) {
    cfg.validate();
    if (class_a.size() < cfg.n_sample || class_b.size() < cfg.n_sample) {
        throw ValidationError("each class needs at least n_sample = " + std::to_string(cfg.n_sample) + " graphs");
    }

    MixupResult result{.samples = {}, .model = InrParams(1), .report = {}, .class_i_moments = {},
                       .class_j_moments = {}, .target = {}, .chosen_i = {}, .chosen_j = {}};
    result.chosen_i = sample_without_replacement(class_a.size(), cfg.n_sample, derive_seed(cfg.seed, kSelectA));
    result.chosen_j = sample_without_replacement(class_b.size(), cfg.n_sample, derive_seed(cfg.seed, kSelectB));

    auto class_average = [&](std::span<const Graph> graphs, const std::vector<std::size_t>& chosen) {
        std::vector<Graph> picked;
        picked.reserve(chosen.size());
        for (auto i : chosen) picked.push_back(graphs[i]);
        const auto moments = census(picked, cfg.jobs);
        return average_moments(moments);
    };
    result.class_i_moments = class_average(class_a, result.chosen_i);
    result.class_j_moments = class_average(class_b, result.chosen_j);
    result.target = mix_moments(result.class_i_moments, result.class_j_moments, cfg.alpha);

    TrainConfig trainer = cfg.trainer;
    trainer.seed = derive_seed(cfg.seed, kTrainer);
    auto fit = train(result.target, trainer);
    result.model = std::move(fit.params);
    result.report = std::move(fit.report);

    const auto graphon = model_graphon(result.model);
    const auto label = soft_label(cfg.label_i, cfg.label_j, cfg.alpha);
    result.samples.resize(cfg.n_graphs);
    parallel_for(cfg.n_graphs, cfg.jobs, [&](std::size_t k) {
        const auto seed = derive_seed(cfg.seed, kSampleBase + k);
        auto sampled = sample_graph(graphon, cfg.n_nodes, seed);
        result.samples[k] = AugmentedSample{std::move(sampled.graph), label, seed};
    });
    return result;
}

}  // namespace momentnet
