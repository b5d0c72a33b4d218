#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "comkex/field.hpp"
#include "comkex/rng.hpp"

// Toy Diffie-Hellman over GF(p), p < 2^61. It exists to count
// multiplications next to the commutant exchange, not for security.

namespace comkex::dh {

struct DhParams {
    std::uint64_t p = 0;
    std::uint64_t g = 0;
};

/// Throws InvalidParams unless p is prime, 2 <= g <= p-1 and, for a safe
/// prime p, g^((p-1)/2) != 1.
void validate(const DhParams& params);

/// Secret exponent, least significant word first. Wider than p when the
/// caller models a larger group's exponent length.
struct DhSecret {
    std::vector<std::uint64_t> words;
};

struct DhKeyPair {
    DhSecret secret;
    Fp pub;
};

/// Exponent uniform in [2, p-2].
DhKeyPair dh_keygen(const DhParams& params, Rng& rng, OpCounter* counter = nullptr);
/// Exponent with exactly `bits` bits (top bit set), bits >= 2.
DhKeyPair dh_keygen_bits(const DhParams& params, std::size_t bits, Rng& rng, OpCounter* counter = nullptr);
DhKeyPair dh_keygen_with(const DhParams& params, DhSecret secret, OpCounter* counter = nullptr);

/// peer^secret mod p. Throws InvalidPublic when peer is 0 or >= p.
Fp dh_shared(const DhParams& params, const DhSecret& secret, std::uint64_t peer, OpCounter* counter = nullptr);

/// Multiplications left-to-right square-and-multiply spends on `e`:
/// (bit length - 1) squarings plus (popcount - 1) multiplies.
std::uint64_t square_multiply_cost(const DhSecret& e) noexcept;

}  // namespace comkex::dh
