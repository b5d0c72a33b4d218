#include "comkex/linalg.hpp"

#include <string>
#include <utility>

#include "comkex/errors.hpp"

namespace comkex {

namespace {

std::string shape(const Matrix& m)
{
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        fail(Errc::DimensionMismatch, std::string(op) + ": " + shape(a) + " vs " + shape(b));
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols)
{
    if (rows == 0 || cols == 0)
        fail(Errc::InvalidDimension, "matrix extents must be positive");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Fp> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries))
{
    if (rows == 0 || cols == 0)
        fail(Errc::InvalidDimension, "matrix extents must be positive");
    if (entries_.size() != rows * cols)
        fail(Errc::DimensionMismatch, "matrix " + std::to_string(rows) + "x" + std::to_string(cols) + " given " +
                                          std::to_string(entries_.size()) + " entries");
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = Fp(1);
    return m;
}

Matrix Matrix::from_rows(const Field& field, std::initializer_list<std::initializer_list<std::int64_t>> rows)
{
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    std::vector<Fp> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c)
            fail(Errc::DimensionMismatch, "ragged row list");
        for (auto v : row)
            entries.push_back(field.from_i64(v));
    }
    return Matrix(r, c, std::move(entries));
}

Matrix Matrix::column(const Vector& v)
{
    return Matrix(v.size(), 1, v);
}

Matrix Matrix::from_columns(std::span<const Vector> cols)
{
    if (cols.empty())
        fail(Errc::InvalidDimension, "no columns");
    const std::size_t n = cols.front().size();
    Matrix m(n, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != n)
            fail(Errc::DimensionMismatch, "columns of unequal length");
        for (std::size_t i = 0; i < n; ++i)
            m(i, j) = cols[j][i];
    }
    return m;
}

Vector Matrix::column_vector(std::size_t c) const
{
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        v[i] = (*this)(i, c);
    return v;
}

bool Matrix::is_zero() const noexcept
{
    return comkex::is_zero(entries_);
}

Matrix mat_mul(const Field& f, const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows())
        fail(Errc::DimensionMismatch, "mat_mul: " + shape(a) + " * " + shape(b));
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Fp acc = f.mul(a(i, 0), b(0, j));
            for (std::size_t t = 1; t < a.cols(); ++t)
                acc = f.add(acc, f.mul(a(i, t), b(t, j)));
            out(i, j) = acc;
        }
    }
    return out;
}

Matrix mat_add(const Field& f, const Matrix& a, const Matrix& b)
{
    require_same_shape(a, b, "mat_add");
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(i, j) = f.add(a(i, j), b(i, j));
    return out;
}

Matrix mat_sub(const Field& f, const Matrix& a, const Matrix& b)
{
    require_same_shape(a, b, "mat_sub");
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(i, j) = f.sub(a(i, j), b(i, j));
    return out;
}

Matrix mat_scale(const Field& f, Fp s, const Matrix& a)
{
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(i, j) = f.mul(s, a(i, j));
    return out;
}

Matrix mat_pow(const Field& f, const Matrix& a, unsigned e)
{
    if (!a.is_square())
        fail(Errc::DimensionMismatch, "mat_pow of non-square " + shape(a));
    Matrix out = Matrix::identity(a.rows());
    for (unsigned i = 0; i < e; ++i)
        out = (i == 0) ? a : mat_mul(f, out, a);
    return out;
}

Vector mat_apply(const Field& f, const Matrix& t, std::span<const Fp> v)
{
    if (t.cols() != v.size())
        fail(Errc::DimensionMismatch,
             "mat_apply: " + shape(t) + " applied to length " + std::to_string(v.size()));
    Vector out(t.rows());
    for (std::size_t i = 0; i < t.rows(); ++i) {
        Fp acc = f.mul(t(i, 0), v[0]);
        for (std::size_t j = 1; j < t.cols(); ++j)
            acc = f.add(acc, f.mul(t(i, j), v[j]));
        out[i] = acc;
    }
    return out;
}

Vector vec_add(const Field& f, std::span<const Fp> a, std::span<const Fp> b)
{
    if (a.size() != b.size())
        fail(Errc::DimensionMismatch, "vec_add of unequal lengths");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = f.add(a[i], b[i]);
    return out;
}

Vector vec_scale(const Field& f, Fp s, std::span<const Fp> v)
{
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = f.mul(s, v[i]);
    return out;
}

bool is_zero(std::span<const Fp> v) noexcept
{
    for (Fp x : v)
        if (x.value != 0)
            return false;
    return true;
}

std::vector<std::size_t> row_reduce(const Field& f, Matrix& a, std::size_t pivot_cols)
{
    std::vector<std::size_t> pivots;
    std::size_t next_row = 0;
    for (std::size_t col = 0; col < pivot_cols && next_row < a.rows(); ++col) {
        std::size_t p = next_row;
        while (p < a.rows() && a(p, col).value == 0)
            ++p;
        if (p == a.rows())
            continue;
        if (p != next_row)
            for (std::size_t j = 0; j < a.cols(); ++j)
                std::swap(a(p, j), a(next_row, j));

        const Fp scale = f.inv(a(next_row, col));
        for (std::size_t j = col; j < a.cols(); ++j)
            a(next_row, j) = f.mul(a(next_row, j), scale);

        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == next_row || a(r, col).value == 0)
                continue;
            const Fp factor = a(r, col);
            for (std::size_t j = col; j < a.cols(); ++j)
                a(r, j) = f.sub(a(r, j), f.mul(factor, a(next_row, j)));
        }
        pivots.push_back(col);
        ++next_row;
    }
    return pivots;
}

SolveResult solve_linear(const Field& f, const Matrix& a, const Matrix& rhs)
{
    if (a.rows() != rhs.rows())
        fail(Errc::DimensionMismatch, "solve_linear: " + shape(a) + " with rhs " + shape(rhs));
    const std::size_t n = a.cols();
    const std::size_t k = rhs.cols();

    Matrix aug(a.rows(), n + k);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug(i, j) = a(i, j);
        for (std::size_t j = 0; j < k; ++j)
            aug(i, n + j) = rhs(i, j);
    }
    const auto pivots = row_reduce(f, aug, n);

    SolveResult result;
    result.rank = pivots.size();

    bool consistent = true;
    for (std::size_t r = pivots.size(); r < aug.rows() && consistent; ++r)
        for (std::size_t j = 0; j < k; ++j)
            if (aug(r, n + j).value != 0) {
                consistent = false;
                break;
            }

    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots)
        is_pivot[c] = true;

    if (consistent) {
        Matrix x(n, k);
        for (std::size_t r = 0; r < pivots.size(); ++r)
            for (std::size_t j = 0; j < k; ++j)
                x(pivots[r], j) = aug(r, n + j);
        result.particular = std::move(x);
    }

    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free])
            continue;
        Vector v(n);
        v[free] = Fp(1);
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = f.neg(aug(r, free));
        result.nullspace.push_back(std::move(v));
    }
    return result;
}

SolveResult solve_linear(const Field& f, const Matrix& a, std::span<const Fp> rhs)
{
    return solve_linear(f, a, Matrix(rhs.size(), 1, Vector(rhs.begin(), rhs.end())));
}

std::size_t rank(const Field& f, Matrix a)
{
    return row_reduce(f, a, a.cols()).size();
}

Matrix invert(const Field& f, const Matrix& a)
{
    if (!a.is_square())
        fail(Errc::DimensionMismatch, "invert of non-square " + shape(a));
    auto result = solve_linear(f, a, Matrix::identity(a.rows()));
    if (result.rank < a.rows())
        fail(Errc::Singular, "matrix has rank " + std::to_string(result.rank) + " < " + std::to_string(a.rows()));
    return std::move(*result.particular);
}

}  // namespace comkex
