#pragma once

#include <cstdint>
#include <limits>

namespace twotier {

/// SplitMix64 generator. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    constexpr explicit SplitMix64(std::uint64_t state = 0) : state_(state) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

constexpr std::uint64_t mix64(std::uint64_t x) { return SplitMix64(x)(); }

/// Independent stream for replication `index` under `seed`. Depends only on
/// the pair, so any partition of replications across workers reproduces the
/// same draws.
constexpr SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix64(mix64(seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL)));
}

/// Uniform double on the open interval (0, 1).
template <class Engine>
double uniform_open01(Engine& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace twotier
