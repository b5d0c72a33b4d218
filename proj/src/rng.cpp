#include "comkex/rng.hpp"

#include <random>

namespace comkex {

Rng Rng::from_entropy()
{
    std::random_device dev;
    std::uint64_t seed = (static_cast<std::uint64_t>(dev()) << 32) ^ dev();
    return Rng(seed);
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept
{
    // Largest multiple of bound that fits in 2^64; draws at or above it are rejected.
    const std::uint64_t rem = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        std::uint64_t x = next_u64();
        if (rem == 0 || x < 0 - rem)
            return x % bound;
    }
}

std::uint64_t Rng::between(std::uint64_t lo, std::uint64_t hi) noexcept
{
    if (lo == 0 && hi == ~std::uint64_t{0})
        return next_u64();
    return lo + below(hi - lo + 1);
}

}  // namespace comkex
