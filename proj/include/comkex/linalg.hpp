#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "comkex/field.hpp"

namespace comkex {

using Vector = std::vector<Fp>;

/// Dense row-major matrix over GF(q).
class Matrix {
public:
    Matrix() = default;
    /// Zero matrix. Throws InvalidDimension for a zero extent.
    Matrix(std::size_t rows, std::size_t cols);
    /// Throws DimensionMismatch unless entries.size() == rows * cols.
    Matrix(std::size_t rows, std::size_t cols, std::vector<Fp> entries);

    static Matrix identity(std::size_t n);
    /// Builds from small integers, reducing each into `field`.
    static Matrix from_rows(const Field& field, std::initializer_list<std::initializer_list<std::int64_t>> rows);
    /// n x 1 matrix holding v.
    static Matrix column(const Vector& v);
    /// Matrix whose j-th column is cols[j]; all columns share one length.
    static Matrix from_columns(std::span<const Vector> cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Fp& operator()(std::size_t r, std::size_t c) noexcept { return entries_[r * cols_ + c]; }
    Fp operator()(std::size_t r, std::size_t c) const noexcept { return entries_[r * cols_ + c]; }

    std::span<const Fp> entries() const noexcept { return entries_; }
    std::span<const Fp> row(std::size_t r) const noexcept { return {entries_.data() + r * cols_, cols_}; }
    Vector column_vector(std::size_t c) const;

    bool is_zero() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Fp> entries_;
};

/// Schoolbook product; rows*inner*cols counted multiplications.
Matrix mat_mul(const Field& f, const Matrix& a, const Matrix& b);
Matrix mat_add(const Field& f, const Matrix& a, const Matrix& b);
Matrix mat_sub(const Field& f, const Matrix& a, const Matrix& b);
Matrix mat_scale(const Field& f, Fp s, const Matrix& a);
/// a^e by repeated multiplication; a^0 is the identity.
Matrix mat_pow(const Field& f, const Matrix& a, unsigned e);

/// t*v with exactly rows*cols multiplications and rows*(cols-1) additions.
Vector mat_apply(const Field& f, const Matrix& t, std::span<const Fp> v);

Vector vec_add(const Field& f, std::span<const Fp> a, std::span<const Fp> b);
Vector vec_scale(const Field& f, Fp s, std::span<const Fp> v);
bool is_zero(std::span<const Fp> v) noexcept;

/// Outcome of solving a*X = rhs. When consistent, `particular` holds the
/// solution with every free variable set to zero, and `nullspace` a basis
/// of {x : a*x = 0}, one vector per free column in increasing order.
struct SolveResult {
    std::optional<Matrix> particular;
    std::vector<Vector> nullspace;
    std::size_t rank = 0;

    bool consistent() const noexcept { return particular.has_value(); }
    /// First column of the particular solution.
    Vector solution() const { return particular->column_vector(0); }
};

/// Reduced row-echelon solve with multi-column right-hand side.
SolveResult solve_linear(const Field& f, const Matrix& a, const Matrix& rhs);
SolveResult solve_linear(const Field& f, const Matrix& a, std::span<const Fp> rhs);

/// Reduced row-echelon form in place; returns the pivot columns. Pivots
/// are the first nonzero entry scanning columns left to right.
std::vector<std::size_t> row_reduce(const Field& f, Matrix& a, std::size_t pivot_cols);

std::size_t rank(const Field& f, Matrix a);

/// Throws Singular when a is not invertible, DimensionMismatch if not square.
Matrix invert(const Field& f, const Matrix& a);

}  // namespace comkex
