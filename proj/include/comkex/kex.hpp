#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "comkex/commutant.hpp"
#include "comkex/field.hpp"
#include "comkex/linalg.hpp"

namespace comkex {

/// Everything both parties share: the field, the block shape, the
/// polynomial degree bound, the public vector zeta and the public ring
/// element z whose polynomials supply every private key.
struct PublicParams {
    Field field;
    BlockShape shape;
    std::size_t degree = 3;
    Vector zeta;
    ZElement z;
    std::optional<std::uint64_t> seed;

    std::size_t m() const noexcept { return shape.m(); }
};

inline constexpr std::size_t kDefaultDegree = 3;

/// Throws InvalidParams when any invariant of PublicParams is broken.
void validate_params(const PublicParams& params);

/// Samples zeta (uniform, nonzero) then a non-degenerate z.
/// Throws InvalidParams for a composite q, k == 0, d < 2 or degree == 0.
PublicParams gen_params(std::uint64_t q, std::size_t k, std::size_t d, std::size_t degree, Rng& rng);

/// Polynomial a_0 + a_1 z + ... + a_D z^D with its cached matrix.
struct PrivateKey {
    std::vector<NilPoly> coeffs;
    Matrix t;
};

struct PublicKey {
    Vector xi;
    friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct SharedKey {
    Vector kappa;

    /// Concatenated 8-byte big-endian entries.
    std::vector<std::uint8_t> to_bytes() const;
    friend bool operator==(const SharedKey&, const SharedKey&) = default;
};

struct KeyPair {
    PrivateKey priv;
    PublicKey pub;
};

/// Builds T from explicit coefficients. Any number >= 1 of coefficients
/// is accepted, each of block size k.
PrivateKey private_key_from_coeffs(const PublicParams& params, std::vector<NilPoly> coeffs);
PublicKey public_key_of(const PublicParams& params, const PrivateKey& key);

/// Uniform coefficients a_0..a_D. A draw with T*zeta == 0 or T scalar is
/// rejected; throws DegenerateKey after kMaxSampleAttempts rejections.
KeyPair keygen(const PublicParams& params, Rng& rng);

/// kappa = T * peer.xi, exactly m^2 counted multiplications.
SharedKey derive_shared(const PublicParams& params, const PrivateKey& key, const PublicKey& peer);

std::vector<std::uint8_t> encode_be(std::span<const Fp> v);
/// Inverse of encode_be. Throws ParseError on a ragged length or a
/// non-canonical entry.
Vector decode_be(std::span<const std::uint8_t> bytes, const Field& field);

enum class OpAction { Keygen, DeriveShared };

/// Counted field operations for one accepted key generation or one
/// derivation under `params`. Deterministic for fixed params.
OpCounter count_ops(OpAction action, const PublicParams& params);

/// Closed forms checked against count_ops:
///   derive: m^2 muls, m(m-1) adds
///   keygen: D*m^3 + m^2 muls (Horner products plus T*zeta; embedding
///           K[N] blocks costs nothing), D*(m^2(m-1) + m^2) + m(m-1) adds
OpCounter predicted_ops(OpAction action, const PublicParams& params);

}  // namespace comkex
