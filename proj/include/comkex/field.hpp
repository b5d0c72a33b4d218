#pragma once

#include <compare>
#include <cstdint>
#include <span>

#include "comkex/rng.hpp"

namespace comkex {

__extension__ using uint128 = unsigned __int128;

/// Canonical residue of GF(q). The modulus lives in the Field context.
struct Fp {
    std::uint64_t value = 0;

    constexpr Fp() = default;
    constexpr explicit Fp(std::uint64_t v) : value(v) {}

    friend constexpr bool operator==(Fp, Fp) = default;
    friend constexpr auto operator<=>(Fp, Fp) = default;
};

/// Field operation tallies. Attach to a Field with `Field::counting`.
struct OpCounter {
    std::uint64_t mul_count = 0;
    std::uint64_t add_count = 0;

    void reset() noexcept { *this = {}; }
    friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n) noexcept;

inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 61;

/// Arithmetic in the prime field Z/qZ, 2 <= q < 2^61.
///
/// Add, sub and neg bump `add_count`; mul bumps `mul_count`. Inversion by
/// extended Euclid touches no counter. Copies share the attached counter.
class Field {
public:
    /// Throws InvalidParams unless q is a prime below 2^61.
    explicit Field(std::uint64_t q);

    std::uint64_t modulus() const noexcept { return q_; }

    /// Copy of this field that reports into `counter`.
    Field counting(OpCounter& counter) const noexcept
    {
        Field f = *this;
        f.counter_ = &counter;
        return f;
    }
    Field uncounted() const noexcept
    {
        Field f = *this;
        f.counter_ = nullptr;
        return f;
    }

    /// Reduces an arbitrary word.
    Fp from_u64(std::uint64_t v) const noexcept { return Fp(v % q_); }
    /// Maps a signed integer to its residue.
    Fp from_i64(std::int64_t v) const noexcept;
    bool is_canonical(Fp a) const noexcept { return a.value < q_; }

    Fp add(Fp a, Fp b) const noexcept
    {
        tick_add();
        std::uint64_t s = a.value + b.value;
        return Fp(s >= q_ ? s - q_ : s);
    }
    Fp sub(Fp a, Fp b) const noexcept
    {
        tick_add();
        return Fp(a.value >= b.value ? a.value - b.value : a.value + q_ - b.value);
    }
    Fp neg(Fp a) const noexcept
    {
        tick_add();
        return Fp(a.value == 0 ? 0 : q_ - a.value);
    }
    Fp mul(Fp a, Fp b) const noexcept
    {
        if (counter_)
            ++counter_->mul_count;
        auto p = static_cast<uint128>(a.value) * b.value;
        return Fp(static_cast<std::uint64_t>(p % q_));
    }

    /// Multiplicative inverse. Throws ZeroInverse for 0.
    Fp inv(Fp a) const;

    /// a^e by left-to-right square-and-multiply. 0^0 = 1.
    Fp pow(Fp a, std::uint64_t e) const noexcept;
    /// a^e for a multi-word exponent, least significant word first.
    Fp pow(Fp a, std::span<const std::uint64_t> e) const noexcept;

    /// Uniform residue in [0, q).
    Fp sample(Rng& rng) const noexcept { return Fp(rng.below(q_)); }
    /// Uniform residue in [1, q).
    Fp sample_nonzero(Rng& rng) const noexcept { return Fp(1 + rng.below(q_ - 1)); }

    friend bool operator==(const Field& a, const Field& b) noexcept { return a.q_ == b.q_; }

private:
    void tick_add() const noexcept
    {
        if (counter_)
            ++counter_->add_count;
    }

    std::uint64_t q_;
    OpCounter* counter_ = nullptr;
};

}  // namespace comkex
