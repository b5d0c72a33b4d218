#include "comkex/field.hpp"

#include <bit>
#include <string>

#include "comkex/errors.hpp"

namespace comkex {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n)
{
    return static_cast<std::uint64_t>(static_cast<uint128>(a) * b % n);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t n)
{
    std::uint64_t r = 1 % n;
    a %= n;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, n);
        a = mulmod(a, a, n);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept
{
    if (n < 2)
        return false;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0)
            return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These twelve bases are a deterministic witness set below 3.3e24.
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

Field::Field(std::uint64_t q) : q_(q)
{
    if (q >= kMaxModulus)
        fail(Errc::InvalidParams, "modulus " + std::to_string(q) + " is not below 2^61");
    if (!is_prime(q))
        fail(Errc::InvalidParams, "modulus " + std::to_string(q) + " is not prime");
}

Fp Field::from_i64(std::int64_t v) const noexcept
{
    auto r = v % static_cast<std::int64_t>(q_);
    if (r < 0)
        r += static_cast<std::int64_t>(q_);
    return Fp(static_cast<std::uint64_t>(r));
}

Fp Field::inv(Fp a) const
{
    if (a.value == 0)
        fail(Errc::ZeroInverse, "0 has no inverse mod " + std::to_string(q_));
    // Extended Euclid on (q, a), tracking only the coefficient of a.
    std::int64_t t0 = 0, t1 = 1;
    std::uint64_t r0 = q_, r1 = a.value;
    while (r1 != 0) {
        std::uint64_t quot = r0 / r1;
        std::uint64_t r2 = r0 - quot * r1;
        std::int64_t t2 = t0 - static_cast<std::int64_t>(quot) * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    return from_i64(t0);
}

Fp Field::pow(Fp a, std::uint64_t e) const noexcept
{
    return pow(a, std::span<const std::uint64_t>(&e, 1));
}

Fp Field::pow(Fp a, std::span<const std::uint64_t> e) const noexcept
{
    std::size_t words = e.size();
    while (words > 0 && e[words - 1] == 0)
        --words;
    if (words == 0)
        return Fp(1 % q_);

    const int top = 63 - std::countl_zero(e[words - 1]);
    Fp result = a;
    for (std::size_t w = words; w-- > 0;) {
        int start = (w == words - 1) ? top - 1 : 63;
        for (int bit = start; bit >= 0; --bit) {
            result = mul(result, result);
            if ((e[w] >> bit) & 1)
                result = mul(result, a);
        }
    }
    return result;
}

}  // namespace comkex
