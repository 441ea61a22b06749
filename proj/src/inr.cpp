#include "momentnet/inr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "fast_math.hpp"
#include "momentnet/errors.hpp"
#include "momentnet/parallel.hpp"
#include "momentnet/rng.hpp"

namespace momentnet {

std::string_view to_string(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
        case Activation::Sine: return "sine";
    }
    return "tanh";
}

Activation parse_activation(std::string_view tag) {
    if (tag == "tanh") return Activation::Tanh;
    if (tag == "sine" || tag == "sin") return Activation::Sine;
    throw ParseError(0, "unknown activation '" + std::string(tag) + "'");
}

InrParams::InrParams(std::size_t hidden, Activation activation, std::uint64_t seed)
    : hidden_(hidden), activation_(activation), seed_(seed), values_(parameter_count(hidden), 0.0) {
    if (hidden == 0) throw DomainError("hidden width must be at least 1");
}

InrParams init_params(std::size_t hidden, std::uint64_t seed, Activation activation) {
    InrParams p(hidden, activation, seed);
    SplitMix64 rng(seed);
    auto v = p.values();
    const double in_scale = 1.0 / std::sqrt(2.0);
    const double out_scale = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (std::size_t i = 0; i < 2 * hidden; ++i) v[i] = in_scale * (2.0 * rng.uniform() - 1.0);
    for (std::size_t i = 0; i < hidden; ++i) v[3 * hidden + i] = out_scale * (2.0 * rng.uniform() - 1.0);
    return p;
}

namespace {

inline double sigmoid(double z) noexcept {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// act[i] = activation(W1[i] . (u, v) + b1[i])
inline void hidden_layer(const InrParams& params, double u, double v, double* act) noexcept {
    const std::size_t h = params.hidden();
    const double* w1 = params.input_weights().data();
    const double* b1 = params.hidden_bias().data();
    if (params.activation() == Activation::Tanh) {
        for (std::size_t i = 0; i < h; ++i) act[i] = detail::tanh(w1[2 * i] * u + w1[2 * i + 1] * v + b1[i]);
    } else {
        for (std::size_t i = 0; i < h; ++i) act[i] = std::sin(w1[2 * i] * u + w1[2 * i + 1] * v + b1[i]);
    }
}

// sigmoid(w2 . act + b2). The dot product uses eight interleaved partial sums
// combined in a fixed order, so it vectorizes and stays bit-reproducible.
inline double output_layer(const InrParams& params, const double* act) noexcept {
    const std::size_t h = params.hidden();
    const double* w2 = params.output_weights().data();
    std::array<double, 8> lanes{};
    std::size_t i = 0;
    for (; i + 8 <= h; i += 8) {
        for (std::size_t k = 0; k < 8; ++k) lanes[k] += w2[i + k] * act[i + k];
    }
    double tail = 0;
    for (; i < h; ++i) tail += w2[i] * act[i];
    const double dot = ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) + ((lanes[4] + lanes[5]) + (lanes[6] + lanes[7]));
    return sigmoid(params.output_bias() + (dot + tail));
}

// Scratch buffer for one pair's hidden activations.
class HiddenScratch {
public:
    explicit HiddenScratch(std::size_t hidden) {
        if (hidden > inline_.size()) heap_.resize(hidden);
    }
    double* data() noexcept { return heap_.empty() ? inline_.data() : heap_.data(); }

private:
    std::array<double, 256> inline_;
    std::vector<double> heap_;
};

// Pairs among the first k tuple coordinates (indices into kTuplePairs).
constexpr std::array<std::array<int, 6>, 5> kPairsOfSize{{{}, {}, {0}, {0, 1, 3}, {0, 1, 2, 3, 4, 5}}};

void check_unit(double x, double y) {
    if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
        throw DomainError("coordinates (" + std::to_string(x) + ", " + std::to_string(y) + ") outside [0,1]^2");
    }
}

constexpr std::size_t kBlock = 256;

}  // namespace

double forward_unchecked(const InrParams& params, double x, double y) noexcept {
    HiddenScratch act(params.hidden());
    hidden_layer(params, std::min(x, y), std::max(x, y), act.data());
    return output_layer(params, act.data());
}

double forward(const InrParams& params, double x, double y) {
    check_unit(x, y);
    return forward_unchecked(params, x, y);
}

std::vector<Tuple4> draw_tuples(std::size_t count, std::uint64_t seed) {
    std::vector<Tuple4> out(count);
    for (std::size_t l = 0; l < count; ++l) {
        for (std::size_t c = 0; c < 4; ++c) out[l][c] = SplitMix64::uniform_at(seed, 4 * l + c);
    }
    return out;
}

LossResult loss_and_grad(const InrParams& params, std::span<const Tuple4> tuples, const MomentVector& target,
                         const MotifWeights& weights, LossWorkspace* workspace, unsigned jobs) {
    if (tuples.empty()) throw DomainError("loss_and_grad needs at least one tuple");
    for (double w : weights) {
        if (!(w >= 0.0)) throw DomainError("motif weights must be non-negative");
    }
    LossWorkspace local;
    LossWorkspace& ws = workspace ? *workspace : local;

    const std::size_t count = tuples.size();
    const std::size_t hidden = params.hidden();
    const std::size_t num_blocks = (count + kBlock - 1) / kBlock;
    ws.outputs_.resize(count * 6);

    // Pass 1: pair values and per-block motif sums.
    std::vector<std::array<double, kNumMotifs>> block_sums(num_blocks);
    parallel_for(num_blocks, jobs, [&](std::size_t b) {
        HiddenScratch act(hidden);
        std::array<double, kNumMotifs> sums{};
        const std::size_t end = std::min(count, (b + 1) * kBlock);
        for (std::size_t l = b * kBlock; l < end; ++l) {
            const auto& t = tuples[l];
            std::array<double, 6> f;
            for (int p = 0; p < 6; ++p) {
                const auto [i, j] = kTuplePairs[p];
                hidden_layer(params, std::min(t[i], t[j]), std::max(t[i], t[j]), act.data());
                f[p] = output_layer(params, act.data());
                ws.outputs_[l * 6 + p] = f[p];
            }
            const auto values = tuple_motif_values(f);
            for (std::size_t m = 0; m < kNumMotifs; ++m) sums[m] += values[m];
        }
        block_sums[b] = sums;
    });

    LossResult result;
    std::array<double, kNumMotifs> coef{};
    const double inv_count = 1.0 / static_cast<double>(count);
    for (std::size_t m = 0; m < kNumMotifs; ++m) {
        double total = 0;
        for (const auto& s : block_sums) total += s[m];
        result.mhat[m] = total / static_cast<double>(count);
        const double diff = target[m] - result.mhat[m];
        result.loss += weights[m] * diff * diff;
        coef[m] = -2.0 * weights[m] * diff * inv_count;
    }
    result.mhat.provenance = Provenance::model(count);

    // Pass 2: d(loss)/d(pair value), then back through the network. Hidden
    // activations are recomputed rather than stored.
    const std::size_t num_params = params.size();
    std::vector<double> block_grads(num_blocks * num_params, 0.0);
    const double* w1 = params.input_weights().data();
    const double* b1 = params.hidden_bias().data();
    const double* w2 = params.output_weights().data();
    const bool sine = params.activation() == Activation::Sine;

    parallel_for(num_blocks, jobs, [&](std::size_t b) {
        HiddenScratch scratch(hidden);
        double* a = scratch.data();
        double* g = &block_grads[b * num_params];
        double* g_w1 = g;
        double* g_b1 = g + 2 * hidden;
        double* g_w2 = g + 3 * hidden;
        double& g_b2 = g[4 * hidden];
        const std::size_t end = std::min(count, (b + 1) * kBlock);
        for (std::size_t l = b * kBlock; l < end; ++l) {
            const double* f = &ws.outputs_[l * 6];
            std::array<double, 6> upstream{};
            for (std::size_t m = 0; m < kNumMotifs; ++m) {
                if (coef[m] == 0.0) continue;
                const auto& motif = kMotifCatalog[m];
                const auto& pairs = kPairsOfSize[motif.k];
                const int used = motif.num_pairs();
                // d(prod)/d(f_p) is the product of the other factors, negated for non-edges.
                std::array<double, 6> factor;
                for (int q = 0; q < used; ++q) {
                    const int p = pairs[q];
                    factor[q] = motif.has_pair(p) ? f[p] : 1.0 - f[p];
                }
                std::array<double, 7> prefix;
                prefix[0] = 1.0;
                for (int q = 0; q < used; ++q) prefix[q + 1] = prefix[q] * factor[q];
                double suffix = 1.0;
                for (int q = used - 1; q >= 0; --q) {
                    const int p = pairs[q];
                    const double others = prefix[q] * suffix;
                    upstream[p] += coef[m] * (motif.has_pair(p) ? others : -others);
                    suffix *= factor[q];
                }
            }
            const auto& t = tuples[l];
            for (int p = 0; p < 6; ++p) {
                if (upstream[p] == 0.0) continue;
                const auto [i, j] = kTuplePairs[p];
                const double u = std::min(t[i], t[j]);
                const double v = std::max(t[i], t[j]);
                const double out_grad = upstream[p] * f[p] * (1.0 - f[p]);
                hidden_layer(params, u, v, a);
                g_b2 += out_grad;
                if (sine) {
                    for (std::size_t h = 0; h < hidden; ++h) {
                        g_w2[h] += out_grad * a[h];
                        const double dz = out_grad * w2[h] * std::cos(w1[2 * h] * u + w1[2 * h + 1] * v + b1[h]);
                        g_w1[2 * h] += dz * u;
                        g_w1[2 * h + 1] += dz * v;
                        g_b1[h] += dz;
                    }
                } else {
                    for (std::size_t h = 0; h < hidden; ++h) {
                        g_w2[h] += out_grad * a[h];
                        const double dz = out_grad * w2[h] * (1.0 - a[h] * a[h]);
                        g_w1[2 * h] += dz * u;
                        g_w1[2 * h + 1] += dz * v;
                        g_b1[h] += dz;
                    }
                }
            }
        }
    });

    result.grad.assign(num_params, 0.0);
    for (std::size_t b = 0; b < num_blocks; ++b) {
        const double* g = &block_grads[b * num_params];
        for (std::size_t k = 0; k < num_params; ++k) result.grad[k] += g[k];
    }
    return result;
}

MomentVector mc_moments(const InrParams& params, std::span<const Tuple4> tuples, unsigned jobs) {
    if (tuples.empty()) throw DomainError("mc_moments needs at least one tuple");
    const std::size_t count = tuples.size();
    const std::size_t num_blocks = (count + kBlock - 1) / kBlock;
    std::vector<std::array<double, kNumMotifs>> block_sums(num_blocks);
    parallel_for(num_blocks, jobs, [&](std::size_t b) {
        HiddenScratch act(params.hidden());
        std::array<double, kNumMotifs> sums{};
        const std::size_t end = std::min(count, (b + 1) * kBlock);
        for (std::size_t l = b * kBlock; l < end; ++l) {
            const auto& t = tuples[l];
            std::array<double, 6> f;
            for (int p = 0; p < 6; ++p) {
                const auto [i, j] = kTuplePairs[p];
                hidden_layer(params, std::min(t[i], t[j]), std::max(t[i], t[j]), act.data());
                f[p] = output_layer(params, act.data());
            }
            const auto values = tuple_motif_values(f);
            for (std::size_t m = 0; m < kNumMotifs; ++m) sums[m] += values[m];
        }
        block_sums[b] = sums;
    });
    MomentVector out;
    for (const auto& s : block_sums) {
        for (std::size_t m = 0; m < kNumMotifs; ++m) out[m] += s[m];
    }
    for (auto& d : out.densities) d /= static_cast<double>(count);
    out.provenance = Provenance::model(count);
    return out;
}

std::string write_model(const InrParams& params) {
    std::string out = "momentnet-model 1\n";
    out += "hidden " + std::to_string(params.hidden()) + "\n";
    out += "activation " + std::string(to_string(params.activation())) + "\n";
    out += "seed " + std::to_string(params.seed()) + "\n";
    out += "params " + std::to_string(params.size()) + "\n";
    char buf[32];
    for (double v : params.values()) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        out.append(buf, ptr);
        out += '\n';
    }
    return out;
}

InrParams parse_model(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string key;
    std::size_t line = 1;
    auto expect = [&](const char* name) {
        if (!(in >> key) || key != name) throw ParseError(line, std::string("expected '") + name + "'");
    };
    expect("momentnet-model");
    int version = 0;
    if (!(in >> version) || version != 1) throw ParseError(line, "unsupported model format version");
    ++line;
    expect("hidden");
    std::size_t hidden = 0;
    if (!(in >> hidden) || hidden == 0) throw ParseError(line, "invalid hidden width");
    ++line;
    expect("activation");
    std::string tag;
    in >> tag;
    const auto activation = parse_activation(tag);
    ++line;
    expect("seed");
    std::uint64_t seed = 0;
    if (!(in >> seed)) throw ParseError(line, "invalid seed");
    ++line;
    expect("params");
    std::size_t count = 0;
    if (!(in >> count) || count != InrParams::parameter_count(hidden)) {
        throw ParseError(line, "parameter count does not match hidden width");
    }
    InrParams params(hidden, activation, seed);
    auto values = params.values();
    for (std::size_t i = 0; i < count; ++i) {
        ++line;
        std::string token;
        if (!(in >> token)) throw ParseError(line, "missing parameter value");
        double v = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v)) {
            throw ParseError(line, "invalid parameter value '" + token + "'");
        }
        values[i] = v;
    }
    std::string extra;
    if (in >> extra) throw ParseError(line + 1, "trailing content after parameters");
    return params;
}

}  // namespace momentnet
