#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "momentnet/errors.hpp"
#include "momentnet/inr.hpp"
#include "momentnet/motif.hpp"

namespace momentnet {

struct TrainConfig {
    std::size_t samples = 20000;  // Monte-Carlo tuples per epoch (L)
    std::size_t max_epochs = 5000;
    double learning_rate = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::size_t patience = 200;
    double min_rel_improvement = 1e-5;
    double weight_floor = 1e-6;
    bool resample_tuples = true;
    std::uint64_t seed = 0;
    std::size_t hidden = 64;
    Activation activation = Activation::Tanh;
    unsigned jobs = 1;

    /// Throws ValidationError when a field is out of range.
    void validate() const;

    std::uint64_t init_seed() const noexcept;
    /// Seed of the tuple batch used at `epoch` (epoch 0 for every epoch when resampling is off).
    std::uint64_t tuple_seed(std::size_t epoch) const noexcept;
    /// Seed of the independent batch used for the final residuals.
    std::uint64_t evaluation_seed() const noexcept;
};

/// Flat "key = value" text; '#' starts a comment. Unknown keys are rejected.
TrainConfig parse_train_config(std::string_view text, TrainConfig base = {});
/// Applies one key/value pair (shared by the config file and CLI overrides).
void set_train_option(TrainConfig& cfg, std::string_view key, std::string_view value);
std::string write_train_config(const TrainConfig& cfg);

enum class StopReason { MaxEpochs, Plateau, NonFinite };
std::string_view to_string(StopReason r);

struct TrainReport {
    std::size_t epochs_run = 0;
    double final_loss = 0;
    double best_loss = 0;
    StopReason stop_reason = StopReason::MaxEpochs;
    std::array<double, kNumMotifs> residuals{};  // |target - mhat| on an independent batch
    MomentVector final_moments;
    std::vector<std::pair<std::size_t, double>> trajectory;  // (epoch, loss), subsampled
    std::string diagnostic;
};

std::string report_to_json(const TrainReport& report);

/// Thrown when the loss or gradient becomes non-finite; carries the partial report.
class TrainingAborted : public NumericalError {
public:
    TrainingAborted(const std::string& what, TrainReport report)
        : NumericalError(what), report_(std::move(report)) {}
    const TrainReport& report() const noexcept { return report_; }

private:
    TrainReport report_;
};

/// w_F = 1 / max(m_F, floor)
MotifWeights weights_from_moments(const MomentVector& m, double floor = 1e-6);

/// Relative-improvement plateau rule. A loss counts as an improvement when it is
/// below best * (1 - threshold); `update` returns true once `patience` consecutive
/// losses fail to improve.
class PlateauDetector {
public:
    PlateauDetector(std::size_t patience, double threshold);

    bool update(double loss);
    double best() const noexcept { return best_; }
    std::size_t stale() const noexcept { return stale_; }

private:
    std::size_t patience_;
    double threshold_;
    double best_;
    std::size_t stale_ = 0;
};

struct TrainResult {
    InrParams params;
    TrainReport report;
};

/// Adam on the weighted moment loss. Deterministic in (target, cfg).
TrainResult train(const MomentVector& target, const TrainConfig& cfg);
/// Same, starting from the given parameters instead of init_params.
TrainResult train(const MomentVector& target, const TrainConfig& cfg, InrParams initial);

/// mhat from `samples` fresh tuples drawn with `seed`; provenance = model(L).
MomentVector estimate_moments(const InrParams& params, std::size_t samples, std::uint64_t seed, unsigned jobs = 1);

}  // namespace momentnet
