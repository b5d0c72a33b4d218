#pragma once

#include <cstdint>

namespace comkex {

/// Seedable 64-bit generator (splitmix64). Two instances built from the
/// same seed produce identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    /// Seeded from the OS entropy source.
    static Rng from_entropy();

    std::uint64_t next_u64() noexcept
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound) by rejection on the word output. bound > 0.
    std::uint64_t below(std::uint64_t bound) noexcept;

    /// Uniform in [lo, hi], inclusive.
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) noexcept;

private:
    std::uint64_t state_;
};

}  // namespace comkex
