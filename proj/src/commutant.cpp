#include "comkex/commutant.hpp"

#include <string>
#include <utility>

#include "comkex/errors.hpp"

namespace comkex {

Matrix DeltaElement::realize() const
{
    Matrix out(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        out(i, i) = scalar;
        if (kind == DeltaKind::Lambda && i + 1 < k)
            out(i, i + 1) = Fp(1);
    }
    return out;
}

DeltaElement build_delta(DeltaKind kind, Fp scalar, std::size_t k)
{
    if (k == 0)
        fail(Errc::InvalidDimension, "block size k must be positive");
    return DeltaElement{kind, scalar, k};
}

NilPoly::NilPoly(std::vector<Fp> coeffs) : coeffs_(std::move(coeffs))
{
    if (coeffs_.empty())
        fail(Errc::InvalidDimension, "NilPoly needs at least one coefficient");
}

NilPoly NilPoly::identity(std::size_t k)
{
    NilPoly p = zero(k);
    p.coeffs_[0] = Fp(1);
    return p;
}

NilPoly NilPoly::sample(const Field& f, std::size_t k, Rng& rng)
{
    std::vector<Fp> c(k);
    for (auto& x : c)
        x = f.sample(rng);
    return NilPoly(std::move(c));
}

Matrix NilPoly::realize() const
{
    const std::size_t k = size();
    Matrix out(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j)
            out(i, j) = coeffs_[j - i];
    return out;
}

NilPoly nil_add(const Field& f, const NilPoly& a, const NilPoly& b)
{
    if (a.size() != b.size())
        fail(Errc::DimensionMismatch, "nil_add of different block sizes");
    std::vector<Fp> c(a.size());
    for (std::size_t j = 0; j < c.size(); ++j)
        c[j] = f.add(a[j], b[j]);
    return NilPoly(std::move(c));
}

NilPoly nil_mul(const Field& f, const NilPoly& a, const NilPoly& b)
{
    if (a.size() != b.size())
        fail(Errc::DimensionMismatch, "nil_mul of different block sizes");
    const std::size_t k = a.size();
    std::vector<Fp> c(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; i + j < k; ++j)
            c[i + j] = f.add(c[i + j], f.mul(a[i], b[j]));
    return NilPoly(std::move(c));
}

Matrix embed_block_diag(const NilPoly& poly, std::size_t d)
{
    if (d == 0)
        fail(Errc::InvalidDimension, "block count d must be positive");
    const std::size_t k = poly.size();
    Matrix out(d * k, d * k);
    for (std::size_t b = 0; b < d; ++b)
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i; j < k; ++j)
                out(b * k + i, b * k + j) = poly[j - i];
    return out;
}

BElement::BElement(const std::vector<std::vector<DeltaElement>>& grid)
{
    const std::size_t d = grid.size();
    if (d == 0)
        fail(Errc::InvalidDimension, "empty block grid");
    const std::size_t k = grid.front().empty() ? 0 : grid.front().front().k;
    if (k == 0)
        fail(Errc::InvalidDimension, "block size k must be positive");
    blocks_.reserve(d * d);
    for (const auto& row : grid) {
        if (row.size() != d)
            fail(Errc::DimensionMismatch, "block grid is not " + std::to_string(d) + "x" + std::to_string(d));
        for (const auto& blk : row) {
            if (blk.k != k)
                fail(Errc::DimensionMismatch, "blocks of different sizes in one grid");
            blocks_.push_back(blk);
        }
    }
    shape_ = BlockShape{k, d};
}

BElement BElement::sample(const Field& f, BlockShape shape, Rng& rng)
{
    std::vector<std::vector<DeltaElement>> grid(shape.d);
    for (auto& row : grid) {
        row.reserve(shape.d);
        for (std::size_t c = 0; c < shape.d; ++c) {
            auto kind = rng.below(2) ? DeltaKind::Lambda : DeltaKind::Gamma;
            row.push_back(build_delta(kind, f.sample(rng), shape.k));
        }
    }
    return BElement(grid);
}

Matrix BElement::realize() const
{
    const auto [k, d] = shape_;
    Matrix out(d * k, d * k);
    for (std::size_t br = 0; br < d; ++br) {
        for (std::size_t bc = 0; bc < d; ++bc) {
            const Matrix blk = block(br, bc).realize();
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j)
                    out(br * k + i, bc * k + j) = blk(i, j);
        }
    }
    return out;
}

ZElement z_from_recipe(const Field& f, BlockShape shape, std::vector<MonoTerm> recipe)
{
    const std::size_t m = shape.m();
    if (recipe.empty())
        fail(Errc::InvalidDimension, "z recipe has no terms");
    Matrix z(m, m);
    for (const auto& term : recipe) {
        Matrix prod = Matrix::identity(m);
        for (const auto& factor : term.factors) {
            if (factor.base.shape() != shape)
                fail(Errc::DimensionMismatch, "recipe factor has the wrong block shape");
            if (factor.exponent == 0)
                continue;
            prod = mat_mul(f, prod, mat_pow(f, factor.base.realize(), factor.exponent));
        }
        z = mat_add(f, z, mat_scale(f, term.coeff, prod));
    }
    return ZElement{std::move(z), std::move(recipe)};
}

bool is_degenerate_z(const Field& f, BlockShape shape, const Matrix& z, const Vector* zeta)
{
    const std::size_t m = shape.m();
    if (z.rows() != m || z.cols() != m)
        fail(Errc::DimensionMismatch, "z is not m x m");

    std::vector<Fp> first_row(z.row(0).begin(), z.row(0).begin() + shape.k);
    if (embed_block_diag(NilPoly(std::move(first_row)), shape.d) == z)
        return true;

    if (zeta != nullptr) {
        const Vector image = mat_apply(f.uncounted(), z, *zeta);
        const Vector cols[] = {*zeta, image};
        if (rank(f.uncounted(), Matrix::from_columns(cols)) < 2)
            return true;
    }
    return false;
}

ZElement sample_z(const Field& f, BlockShape shape, Rng& rng, const Vector* zeta)
{
    for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
        std::vector<MonoTerm> recipe(1 + rng.below(4));
        for (auto& term : recipe) {
            term.coeff = f.sample(rng);
            const auto factors = 1 + rng.below(3);
            for (std::uint64_t i = 0; i < factors; ++i) {
                BElement base = BElement::sample(f, shape, rng);
                const auto exponent = static_cast<unsigned>(rng.below(4));
                term.factors.push_back(MonoFactor{std::move(base), exponent});
            }
        }
        ZElement z = z_from_recipe(f, shape, std::move(recipe));
        if (!is_degenerate_z(f, shape, z.matrix, zeta))
            return z;
    }
    fail(Errc::DegenerateZ, "no usable z after " + std::to_string(kMaxSampleAttempts) + " attempts");
}

Matrix eval_poly_in_z(const Field& f, std::span<const NilPoly> coeffs, const Matrix& z, BlockShape shape)
{
    if (coeffs.empty())
        fail(Errc::InvalidDimension, "polynomial has no coefficients");
    if (z.rows() != shape.m() || z.cols() != shape.m())
        fail(Errc::DimensionMismatch, "z does not match the block shape");
    for (const auto& a : coeffs)
        if (a.size() != shape.k)
            fail(Errc::DimensionMismatch, "coefficient block size differs from k");

    Matrix t = embed_block_diag(coeffs.back(), shape.d);
    for (std::size_t i = coeffs.size() - 1; i-- > 0;)
        t = mat_add(f, mat_mul(f, t, z), embed_block_diag(coeffs[i], shape.d));
    return t;
}

Matrix keygen_power_basis(const Field& f, const Matrix& a, std::span<const Fp> coeffs)
{
    if (!a.is_square())
        fail(Errc::DimensionMismatch, "power basis needs a square matrix");
    const std::size_t n = a.rows();
    Matrix t(n, n);
    Matrix power = Matrix::identity(n);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (i > 0)
            power = mat_mul(f, power, a);
        t = mat_add(f, t, mat_scale(f, coeffs[i], power));
    }
    return t;
}

bool check_commute(const Field& f, const Matrix& a, const Matrix& b)
{
    if (!a.is_square() || !b.is_square() || a.rows() != b.rows())
        fail(Errc::DimensionMismatch, "check_commute needs square matrices of equal size");
    return mat_mul(f, a, b) == mat_mul(f, b, a);
}

std::vector<Matrix> qz_basis(const Field& f, const Matrix& z, BlockShape shape, std::size_t degree)
{
    const std::size_t m = shape.m();
    if (z.rows() != m || z.cols() != m)
        fail(Errc::DimensionMismatch, "z does not match the block shape");

    std::vector<Matrix> shifts;
    for (std::size_t j = 0; j < shape.k; ++j) {
        std::vector<Fp> c(shape.k);
        c[j] = Fp(1);
        shifts.push_back(embed_block_diag(NilPoly(std::move(c)), shape.d));
    }

    std::vector<Matrix> basis;
    basis.reserve((degree + 1) * shape.k);
    Matrix zi = Matrix::identity(m);
    for (std::size_t i = 0; i <= degree; ++i) {
        if (i > 0)
            zi = mat_mul(f, zi, z);
        for (const auto& s : shifts)
            basis.push_back(mat_mul(f, s, zi));
    }
    return basis;
}

}  // namespace comkex
