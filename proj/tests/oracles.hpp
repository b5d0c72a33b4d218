#pragma once

// Reference computations used to freeze expected values. Plain integer
// arithmetic only: nothing here calls into the library's field or matrix
// code, so a bug there cannot hide behind a matching oracle.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "comkex/errors.hpp"
#include "comkex/linalg.hpp"

namespace oracle {

using Mat = std::vector<std::vector<std::uint64_t>>;
using Vec = std::vector<std::uint64_t>;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t q)
{
    return static_cast<std::uint64_t>(static_cast<comkex::uint128>(a) * b % q);
}

inline Mat mul(const Mat& a, const Mat& b, std::uint64_t q)
{
    Mat out(a.size(), Vec(b[0].size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b[0].size(); ++j)
            for (std::size_t t = 0; t < b.size(); ++t)
                out[i][j] = (out[i][j] + mulmod(a[i][t], b[t][j], q)) % q;
    return out;
}

inline Vec apply(const Mat& a, const Vec& v, std::uint64_t q)
{
    Vec out(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            out[i] = (out[i] + mulmod(a[i][j], v[j], q)) % q;
    return out;
}

inline Mat add(const Mat& a, const Mat& b, std::uint64_t q)
{
    Mat out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            out[i][j] = (a[i][j] + b[i][j]) % q;
    return out;
}

inline Mat scale(std::uint64_t s, const Mat& a, std::uint64_t q)
{
    Mat out = a;
    for (auto& row : out)
        for (auto& x : row)
            x = mulmod(s, x, q);
    return out;
}

inline Mat identity(std::size_t n)
{
    Mat out(n, Vec(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        out[i][i] = 1;
    return out;
}

/// Inverse by trying every residue.
inline std::optional<std::uint64_t> inverse_by_search(std::uint64_t a, std::uint64_t q)
{
    for (std::uint64_t b = 0; b < q; ++b)
        if (mulmod(a, b, q) == 1)
            return b;
    return std::nullopt;
}

/// a^e by e multiplications.
inline std::uint64_t pow_by_repetition(std::uint64_t a, std::uint64_t e, std::uint64_t q)
{
    std::uint64_t r = 1 % q;
    for (std::uint64_t i = 0; i < e; ++i)
        r = mulmod(r, a, q);
    return r;
}

/// Every x in GF(q)^n with a x = b.
inline std::vector<Vec> solutions_by_enumeration(const Mat& a, const Vec& b, std::uint64_t q)
{
    const std::size_t n = a[0].size();
    std::vector<Vec> out;
    Vec x(n, 0);
    for (;;) {
        if (apply(a, x, q) == b)
            out.push_back(x);
        std::size_t i = 0;
        while (i < n && ++x[i] == q)
            x[i++] = 0;
        if (i == n)
            break;
    }
    return out;
}

/// rank = log_q |{a x}| over all x; tiny q and n only.
inline std::size_t rank_by_image(const Mat& a, std::uint64_t q)
{
    const std::size_t n = a[0].size();
    std::set<Vec> image;
    Vec x(n, 0);
    for (;;) {
        image.insert(apply(a, x, q));
        std::size_t i = 0;
        while (i < n && ++x[i] == q)
            x[i++] = 0;
        if (i == n)
            break;
    }
    std::size_t r = 0;
    for (std::size_t size = 1; size < image.size(); size *= q)
        ++r;
    return r;
}

inline Mat from(const comkex::Matrix& m)
{
    Mat out(m.rows(), Vec(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out[i][j] = m(i, j).value;
    return out;
}

inline Vec from(const comkex::Vector& v)
{
    Vec out;
    for (auto x : v)
        out.push_back(x.value);
    return out;
}

}  // namespace oracle

namespace testing {

/// Runs fn and returns the Errc it threw, or nullopt.
inline std::optional<comkex::Errc> error_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const comkex::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline comkex::Vector vec(const comkex::Field& f, std::initializer_list<std::int64_t> xs)
{
    comkex::Vector v;
    for (auto x : xs)
        v.push_back(f.from_i64(x));
    return v;
}

}  // namespace testing
