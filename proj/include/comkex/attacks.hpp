#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "comkex/kex.hpp"

// Linearization attacks on the commutant key exchange.
//
// Any two keys T, T_i built over the same params commute, so
//   T_i * (T * zeta) = T * (T_i * zeta),   i.e.   T * xi_i = T_i * xi.
// Knowing T_i turns every directory entry into m linear equations on T.

namespace comkex {

struct DirectoryEntry {
    PublicKey pub;
    std::optional<PrivateKey> priv;
};

/// The adversary's collection of public keys, some with private halves.
struct KeyDirectory {
    std::vector<DirectoryEntry> entries;

    std::size_t known_private() const noexcept;
    /// Dimension of the span of every public key in the directory.
    std::size_t rank(const PublicParams& params) const;
};

enum class RecoveryMode { FullMatrix, Structured };

struct RecoveredKey {
    Matrix t_hat;
    RecoveryMode mode = RecoveryMode::FullMatrix;
    /// Unknowns minus rank; zero when the solution is unique.
    std::size_t residual_rank_deficit = 0;
    std::size_t equations_used = 0;
    std::size_t rank = 0;
    /// Basis coefficients, structured mode only.
    std::vector<NilPoly> coeffs;
};

/// Recovers the private key behind `target` from directory entries whose
/// private keys are known.
///
/// FullMatrix takes the first m entries with independent public keys,
/// forms rho_i = T_i * xi_target, and returns T = [rho] * [xi]^-1. Throws
/// InsufficientRank when fewer than m independent keys are available.
///
/// Structured solves for coefficients of embed(N^j) z^i (i <= degree)
/// from every known entry plus T * zeta = xi_target. When underdetermined
/// the free coefficients are zero. Throws InconsistentSystem when no such
/// combination exists, which only happens for corrupted inputs.
RecoveredKey recover_private_key(const PublicParams& params, const KeyDirectory& dir, const PublicKey& target,
                                 RecoveryMode mode, std::optional<std::size_t> degree = std::nullopt);

struct DirectoryRecovery {
    SharedKey shared;
    /// beta = sum c_i xi_i over the known-private entries, in order.
    Vector combination;
    std::size_t rank = 0;
};

/// Shared key between the owner of `victim` and the owner of
/// `counterpart` without either private key: writes victim as a
/// combination of known-private public keys and maps the counterpart key
/// through the same combination of private keys. Throws OutOfSpan when
/// the victim key is outside the span.
DirectoryRecovery recover_shared_from_directory(const PublicParams& params, const KeyDirectory& dir,
                                                const PublicKey& victim, const PublicKey& counterpart);

struct PassiveRecovery {
    SharedKey shared;
    PrivateKey equivalent_key;
    std::size_t degree_used = 0;
    std::size_t rank = 0;
    std::size_t unknowns = 0;
};

/// Passive break from public data alone: finds any T' in the span of
/// embed(N^j) z^i with T' * zeta = pub_a, then returns T' * pub_b. T'
/// commutes with the peer's key, so the result is the honest shared key.
/// On an inconsistent system the degree is doubled up to m^2; throws
/// NoSolution past that.
PassiveRecovery passive_commutant_attack(const PublicParams& params, const PublicKey& pub_a, const PublicKey& pub_b,
                                         std::optional<std::size_t> degree = std::nullopt);

}  // namespace comkex
