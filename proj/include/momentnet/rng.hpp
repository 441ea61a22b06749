#pragma once

#include <cstdint>

namespace momentnet {

/// SplitMix64 (Steele, Lea & Flood, 2014).
///
/// The generator state is a 64-bit counter advanced by the golden-ratio
/// increment 0x9E3779B97F4A7C15; each output is the state passed through the
/// `mix` finalizer below. Because the i-th output (0-based) of a stream seeded
/// with `s` is `mix(s + (i + 1) * 0x9E3779B97F4A7C15)`, any position of a
/// stream can be computed directly with `at`, which lets parallel workers
/// consume disjoint ranges of one stream without coordination.
///
/// Uniform doubles take the top 53 bits: `(x >> 11) * 2^-53`, in [0, 1).
class SplitMix64 {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t next() noexcept {
        state_ += kGamma;
        return mix(state_);
    }

    constexpr double uniform() noexcept { return to_unit(next()); }

    /// Output at 0-based position `index` of the stream seeded with `seed`.
    static constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t index) noexcept {
        return mix(seed + (index + 1) * kGamma);
    }

    static constexpr double uniform_at(std::uint64_t seed, std::uint64_t index) noexcept {
        return to_unit(at(seed, index));
    }

    static constexpr double to_unit(std::uint64_t x) noexcept {
        return static_cast<double>(x >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Child seed for sub-stream `stream` of `seed`: `mix(seed ^ mix(stream + gamma))`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return SplitMix64::mix(seed ^ SplitMix64::mix(stream + SplitMix64::kGamma));
}

}  // namespace momentnet
