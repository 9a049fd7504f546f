#pragma once

#include <cstdint>
#include <random>

namespace topocc {

/// Seeded pseudorandom stream. Child streams are derived by mixing the
/// parent seed with a stream tag, so independent consumers (one Monte Carlo
/// run, one sampler, one protocol's public coins) never share state.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(mix(seed)) {}

    [[nodiscard]] Rng split(std::uint64_t tag) const { return Rng(mix(seed_ ^ mix(tag + 0x9e3779b97f4a7c15ULL))); }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    result_type operator()() { return engine_(); }
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

    bool coin() { return (engine_() >> 63) != 0; }

    /// Uniform integer in [lo, hi].
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(engine_);
    }

    /// Uniform real in (0, 1].
    double unit_open_left() { return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

private:
    // splitmix64 finalizer
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace topocc
