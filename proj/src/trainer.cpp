#include "momentnet/trainer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <json.hpp>
#include <limits>

#include "momentnet/rng.hpp"

namespace momentnet {

namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kEvalStream = 2;
constexpr std::uint64_t kTupleStreamBase = 1000;
constexpr std::size_t kTrajectoryStride = 10;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ParseError(0, "invalid value '" + std::string(value) + "' for " + std::string(key));
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ParseError(0, "invalid boolean '" + std::string(value) + "' for " + std::string(key));
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

void TrainConfig::validate() const {
    if (samples < 1) throw ValidationError("samples (L) must be at least 1");
    if (max_epochs < 1) throw ValidationError("max_epochs must be at least 1");
    if (!(learning_rate > 0.0)) throw ValidationError("learning_rate must be positive");
    if (patience < 1) throw ValidationError("patience must be at least 1");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw ValidationError("Adam moment coefficients must lie in [0,1)");
    }
    if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
    if (!(min_rel_improvement >= 0.0)) throw ValidationError("min_rel_improvement must be non-negative");
    if (!(weight_floor > 0.0)) throw ValidationError("weight_floor must be positive");
    if (hidden < 1) throw ValidationError("hidden must be at least 1");
}

std::uint64_t TrainConfig::init_seed() const noexcept { return derive_seed(seed, kInitStream); }

std::uint64_t TrainConfig::tuple_seed(std::size_t epoch) const noexcept {
    return derive_seed(seed, kTupleStreamBase + (resample_tuples ? epoch : 0));
}

std::uint64_t TrainConfig::evaluation_seed() const noexcept { return derive_seed(seed, kEvalStream); }

void set_train_option(TrainConfig& cfg, std::string_view key, std::string_view value) {
    if (key == "samples" || key == "L") cfg.samples = parse_number<std::size_t>(key, value);
    else if (key == "max_epochs") cfg.max_epochs = parse_number<std::size_t>(key, value);
    else if (key == "learning_rate") cfg.learning_rate = parse_number<double>(key, value);
    else if (key == "beta1") cfg.beta1 = parse_number<double>(key, value);
    else if (key == "beta2") cfg.beta2 = parse_number<double>(key, value);
    else if (key == "epsilon") cfg.epsilon = parse_number<double>(key, value);
    else if (key == "patience") cfg.patience = parse_number<std::size_t>(key, value);
    else if (key == "min_rel_improvement") cfg.min_rel_improvement = parse_number<double>(key, value);
    else if (key == "weight_floor") cfg.weight_floor = parse_number<double>(key, value);
    else if (key == "resample_tuples") cfg.resample_tuples = parse_bool(key, value);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "hidden") cfg.hidden = parse_number<std::size_t>(key, value);
    else if (key == "activation") cfg.activation = parse_activation(value);
    else if (key == "jobs") cfg.jobs = parse_number<unsigned>(key, value);
    else throw ParseError(0, "unknown config key '" + std::string(key) + "'");
}

TrainConfig parse_train_config(std::string_view text, TrainConfig base) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value");
        try {
            set_train_option(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ParseError& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return base;
}

std::string write_train_config(const TrainConfig& cfg) {
    std::string out;
    auto put = [&](const char* key, const std::string& value) { out += std::string(key) + " = " + value + "\n"; };
    put("samples", std::to_string(cfg.samples));
    put("max_epochs", std::to_string(cfg.max_epochs));
    put("learning_rate", format_double(cfg.learning_rate));
    put("beta1", format_double(cfg.beta1));
    put("beta2", format_double(cfg.beta2));
    put("epsilon", format_double(cfg.epsilon));
    put("patience", std::to_string(cfg.patience));
    put("min_rel_improvement", format_double(cfg.min_rel_improvement));
    put("weight_floor", format_double(cfg.weight_floor));
    put("resample_tuples", cfg.resample_tuples ? "true" : "false");
    put("seed", std::to_string(cfg.seed));
    put("hidden", std::to_string(cfg.hidden));
    put("activation", std::string(to_string(cfg.activation)));
    put("jobs", std::to_string(cfg.jobs));
    return out;
}

std::string_view to_string(StopReason r) {
    switch (r) {
        case StopReason::MaxEpochs: return "max_epochs";
        case StopReason::Plateau: return "plateau";
        case StopReason::NonFinite: return "non_finite";
    }
    return "unknown";
}

std::string report_to_json(const TrainReport& report) {
    nlohmann::ordered_json j;
    j["epochs_run"] = report.epochs_run;
    j["final_loss"] = report.final_loss;
    j["best_loss"] = report.best_loss;
    j["stop_reason"] = std::string(to_string(report.stop_reason));
    j["residuals"] = report.residuals;
    j["final_moments"] = report.final_moments.densities;
    auto traj = nlohmann::json::array();
    for (auto [epoch, loss] : report.trajectory) traj.push_back({epoch, loss});
    j["trajectory"] = traj;
    if (!report.diagnostic.empty()) j["diagnostic"] = report.diagnostic;
    return j.dump(2) + "\n";
}

MotifWeights weights_from_moments(const MomentVector& m, double floor) {
    MotifWeights w{};
    for (std::size_t i = 0; i < kNumMotifs; ++i) w[i] = 1.0 / std::max(m[i], floor);
    return w;
}

PlateauDetector::PlateauDetector(std::size_t patience, double threshold)
    : patience_(patience), threshold_(threshold), best_(std::numeric_limits<double>::infinity()) {}

bool PlateauDetector::update(double loss) {
    if (loss < best_ * (1.0 - threshold_) || best_ == std::numeric_limits<double>::infinity()) {
        best_ = loss;
        stale_ = 0;
        return false;
    }
    ++stale_;
    return stale_ >= patience_;
}

TrainResult train(const MomentVector& target, const TrainConfig& cfg) {
    cfg.validate();
    return train(target, cfg, init_params(cfg.hidden, cfg.init_seed(), cfg.activation));
}

TrainResult train(const MomentVector& target, const TrainConfig& cfg, InrParams params) {
    cfg.validate();
    for (double d : target.densities) {
        if (!(d >= 0.0 && d <= 1.0)) throw ValidationError("target densities must lie in [0,1]");
    }
    const auto weights = weights_from_moments(target, cfg.weight_floor);
    const std::size_t n = params.size();
    std::vector<double> first(n, 0.0), second(n, 0.0);
    PlateauDetector plateau(cfg.patience, cfg.min_rel_improvement);
    LossWorkspace workspace;
    TrainReport report;
    std::vector<Tuple4> tuples;
    double beta1_power = 1.0, beta2_power = 1.0;

    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        if (epoch == 0 || cfg.resample_tuples) tuples = draw_tuples(cfg.samples, cfg.tuple_seed(epoch));
        auto step = loss_and_grad(params, tuples, target, weights, &workspace, cfg.jobs);

        const bool finite = std::isfinite(step.loss) &&
                            std::all_of(step.grad.begin(), step.grad.end(), [](double g) { return std::isfinite(g); });
        if (!finite) {
            report.epochs_run = epoch;
            report.stop_reason = StopReason::NonFinite;
            report.final_loss = step.loss;
            report.best_loss = plateau.best();
            report.diagnostic = "non-finite loss or gradient at epoch " + std::to_string(epoch);
            throw TrainingAborted(report.diagnostic, std::move(report));
        }

        report.epochs_run = epoch + 1;
        report.final_loss = step.loss;
        if (epoch % kTrajectoryStride == 0) report.trajectory.emplace_back(epoch, step.loss);
        const bool stop = plateau.update(step.loss);
        if (stop) {
            report.stop_reason = StopReason::Plateau;
            break;
        }

        beta1_power *= cfg.beta1;
        beta2_power *= cfg.beta2;
        auto values = params.values();
        for (std::size_t k = 0; k < n; ++k) {
            const double g = step.grad[k];
            first[k] = cfg.beta1 * first[k] + (1.0 - cfg.beta1) * g;
            second[k] = cfg.beta2 * second[k] + (1.0 - cfg.beta2) * g * g;
            const double m_hat = first[k] / (1.0 - beta1_power);
            const double v_hat = second[k] / (1.0 - beta2_power);
            values[k] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
        }
    }
    if (report.trajectory.empty() || report.trajectory.back().first != report.epochs_run - 1) {
        report.trajectory.emplace_back(report.epochs_run - 1, report.final_loss);
    }
    report.best_loss = plateau.best();

    report.final_moments = estimate_moments(params, cfg.samples, cfg.evaluation_seed(), cfg.jobs);
    for (std::size_t m = 0; m < kNumMotifs; ++m) report.residuals[m] = std::abs(target[m] - report.final_moments[m]);
    return {std::move(params), std::move(report)};
}

MomentVector estimate_moments(const InrParams& params, std::size_t samples, std::uint64_t seed, unsigned jobs) {
    const auto tuples = draw_tuples(samples, seed);
    return mc_moments(params, tuples, jobs);
}

}  // namespace momentnet
