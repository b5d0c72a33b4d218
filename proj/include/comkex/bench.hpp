#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "comkex/codec.hpp"
#include "comkex/dh.hpp"
#include "comkex/kex.hpp"

namespace comkex {

struct BenchConfig {
    std::uint64_t q = 2147483647;
    std::size_t k = 8;
    std::size_t d = 2;
    std::size_t degree = kDefaultDegree;
    dh::DhParams dh{2147483647, 7};
    /// DH exponent length; defaults to the commutant public key's bit
    /// length (m times the bit length of q) so both keys are the same size.
    std::optional<std::size_t> dh_exponent_bits;
    std::uint64_t seed = 1;
    /// Derivations per system when timing.
    std::size_t repetitions = 200;
};

struct BenchEntry {
    std::string system;
    /// m for the commutant scheme, exponent bits for DH.
    std::uint64_t m_or_p_bits = 0;
    std::uint64_t public_key_bits = 0;
    std::uint64_t muls = 0;
    std::uint64_t adds = 0;
    std::uint64_t wall_ns = 0;
};

struct BenchReport {
    std::vector<BenchEntry> entries;

    const BenchEntry& entry(const std::string& system) const;
    /// DH multiplications per commutant multiplication for one derivation.
    double mul_ratio() const;
    codec::Json to_json() const;
};

/// Counts one shared-key derivation for each system (wall time is the
/// mean over `repetitions`). Entries: "commutant-kex", "diffie-hellman".
BenchReport run_bench(const BenchConfig& config);

std::size_t bit_length(std::uint64_t v) noexcept;

}  // namespace comkex
