#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "comkex/field.hpp"
#include "comkex/linalg.hpp"
#include "comkex/rng.hpp"

// Commuting matrix families over GF(q).
//
// N is the k x k upper shift (ones on the first superdiagonal). The
// generator set Delta holds scalar blocks mu*I and Jordan blocks
// lambda*I + N; they all lie in K[N], the upper-triangular Toeplitz
// matrices. An m x m matrix with m = d*k is split into a d x d grid of
// k x k blocks:
//
//   A family: block-diagonal, the same K[N] block repeated d times
//   B family: any d x d grid of Delta blocks
//
// Every A commutes with every B because K[N] is commutative, so any z
// built from B elements commutes with all of Q(A), and polynomials in z
// with Q(A) coefficients form a commutative ring.

namespace comkex {

/// Block size k and block count d of an m x m matrix, m = d*k.
struct BlockShape {
    std::size_t k = 1;
    std::size_t d = 1;

    std::size_t m() const noexcept { return k * d; }
    friend bool operator==(BlockShape, BlockShape) = default;
};

enum class DeltaKind { Gamma, Lambda };

/// Gamma(mu) realizes as mu*I_k; Lambda(lambda) as lambda*I_k + N.
struct DeltaElement {
    DeltaKind kind = DeltaKind::Gamma;
    Fp scalar;
    std::size_t k = 1;

    Matrix realize() const;
    friend bool operator==(const DeltaElement&, const DeltaElement&) = default;
};

/// Throws InvalidDimension if k == 0.
DeltaElement build_delta(DeltaKind kind, Fp scalar, std::size_t k);

/// Element sum_j c_j N^j of K[N], stored by its k coefficients.
class NilPoly {
public:
    /// Throws InvalidDimension for an empty coefficient list.
    explicit NilPoly(std::vector<Fp> coeffs);

    static NilPoly zero(std::size_t k) { return NilPoly(std::vector<Fp>(k)); }
    static NilPoly identity(std::size_t k);
    static NilPoly sample(const Field& f, std::size_t k, Rng& rng);

    std::size_t size() const noexcept { return coeffs_.size(); }
    std::span<const Fp> coeffs() const noexcept { return coeffs_; }
    Fp operator[](std::size_t j) const noexcept { return coeffs_[j]; }

    /// Upper-triangular Toeplitz realization: entry (i, j) = c_{j-i}.
    Matrix realize() const;

    friend bool operator==(const NilPoly&, const NilPoly&) = default;

private:
    std::vector<Fp> coeffs_;
};

NilPoly nil_add(const Field& f, const NilPoly& a, const NilPoly& b);
/// Convolution truncated to k terms (N^k = 0).
NilPoly nil_mul(const Field& f, const NilPoly& a, const NilPoly& b);

/// d copies of poly's realization on the diagonal. Touches no counter.
Matrix embed_block_diag(const NilPoly& poly, std::size_t d);

struct AElement {
    NilPoly poly;
    std::size_t d = 1;

    Matrix realize() const { return embed_block_diag(poly, d); }
};

/// d x d grid of Delta blocks, stored row-major.
class BElement {
public:
    /// Throws DimensionMismatch on a ragged grid or mixed block sizes,
    /// InvalidDimension on an empty grid.
    explicit BElement(const std::vector<std::vector<DeltaElement>>& grid);

    static BElement sample(const Field& f, BlockShape shape, Rng& rng);

    BlockShape shape() const noexcept { return shape_; }
    const DeltaElement& block(std::size_t r, std::size_t c) const noexcept { return blocks_[r * shape_.d + c]; }
    Matrix realize() const;

    friend bool operator==(const BElement&, const BElement&) = default;

private:
    BlockShape shape_;
    std::vector<DeltaElement> blocks_;
};

inline BElement build_b_element(const std::vector<std::vector<DeltaElement>>& grid)
{
    return BElement(grid);
}

struct MonoFactor {
    BElement base;
    unsigned exponent = 0;
};

/// coeff * B_1^{e_1} * ... * B_t^{e_t}
struct MonoTerm {
    Fp coeff;
    std::vector<MonoFactor> factors;
};

/// An element of Q(B): the dense matrix plus the mono-term recipe that
/// produced it (empty when the matrix came from outside).
struct ZElement {
    Matrix matrix;
    std::vector<MonoTerm> recipe;
};

/// Evaluates a recipe. Throws DimensionMismatch if a factor's shape differs.
ZElement z_from_recipe(const Field& f, BlockShape shape, std::vector<MonoTerm> recipe);

/// True when z falls inside the embedded K[N] (so Q[z] collapses into
/// Q(A)), or when zeta is given and z*zeta is a multiple of zeta.
bool is_degenerate_z(const Field& f, BlockShape shape, const Matrix& z, const Vector* zeta = nullptr);

inline constexpr int kMaxSampleAttempts = 16;

/// Random z: 1..4 mono-terms, each a product of 1..3 random B elements
/// raised to exponents 0..3, with random coefficients. Degenerate draws are
/// retried; throws DegenerateZ after kMaxSampleAttempts failures.
ZElement sample_z(const Field& f, BlockShape shape, Rng& rng, const Vector* zeta = nullptr);

/// sum_i embed(a_i) * z^i by Horner's rule: D = coeffs.size() - 1 matrix
/// products and D matrix additions.
Matrix eval_poly_in_z(const Field& f, std::span<const NilPoly> coeffs, const Matrix& z, BlockShape shape);

/// sum_i c_i a^i. The naive construction, kept as a weak baseline.
Matrix keygen_power_basis(const Field& f, const Matrix& a, std::span<const Fp> coeffs);

/// ab == ba. Throws DimensionMismatch unless both are square of equal size.
bool check_commute(const Field& f, const Matrix& a, const Matrix& b);

/// The spanning set embed(N^j) * z^i, i <= degree, j < k, ordered with i
/// major. Every key of degree <= `degree` is a combination of these.
std::vector<Matrix> qz_basis(const Field& f, const Matrix& z, BlockShape shape, std::size_t degree);

}  // namespace comkex
