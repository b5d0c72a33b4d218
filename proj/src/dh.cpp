#include "comkex/dh.hpp"

#include <bit>
#include <string>
#include <utility>

#include "comkex/errors.hpp"

namespace comkex::dh {

namespace {

Field field_for(const DhParams& params, OpCounter* counter)
{
    Field f(params.p);
    return counter ? f.counting(*counter) : f;
}

}  // namespace

void validate(const DhParams& params)
{
    if (params.p < 5 || params.p >= kMaxModulus || !is_prime(params.p))
        fail(Errc::InvalidParams, "p = " + std::to_string(params.p) + " is not a prime in [5, 2^61)");
    if (params.g < 2 || params.g > params.p - 1)
        fail(Errc::InvalidParams, "g must lie in [2, p-1]");
    const std::uint64_t half = (params.p - 1) / 2;
    if (is_prime(half)) {
        Field f(params.p);
        if (f.pow(Fp(params.g), half) == Fp(1))
            fail(Errc::InvalidParams, "g generates only the quadratic residues");
    }
}

DhKeyPair dh_keygen(const DhParams& params, Rng& rng, OpCounter* counter)
{
    validate(params);
    return dh_keygen_with(params, DhSecret{{rng.between(2, params.p - 2)}}, counter);
}

DhKeyPair dh_keygen_bits(const DhParams& params, std::size_t bits, Rng& rng, OpCounter* counter)
{
    validate(params);
    if (bits < 2)
        fail(Errc::InvalidParams, "exponent needs at least 2 bits");
    DhSecret s;
    s.words.resize((bits + 63) / 64);
    for (auto& w : s.words)
        w = rng.next_u64();
    const std::size_t top = (bits - 1) % 64;
    auto& last = s.words.back();
    if (top < 63)
        last &= (std::uint64_t{1} << (top + 1)) - 1;
    last |= std::uint64_t{1} << top;
    return dh_keygen_with(params, std::move(s), counter);
}

DhKeyPair dh_keygen_with(const DhParams& params, DhSecret secret, OpCounter* counter)
{
    validate(params);
    const Fp pub = field_for(params, counter).pow(Fp(params.g), secret.words);
    return DhKeyPair{std::move(secret), pub};
}

Fp dh_shared(const DhParams& params, const DhSecret& secret, std::uint64_t peer, OpCounter* counter)
{
    if (peer == 0 || peer >= params.p)
        fail(Errc::InvalidPublic, "peer public " + std::to_string(peer) + " is outside [1, p-1]");
    return field_for(params, counter).pow(Fp(peer), secret.words);
}

std::uint64_t square_multiply_cost(const DhSecret& e) noexcept
{
    std::uint64_t bits = 0;
    std::uint64_t ones = 0;
    for (std::size_t i = 0; i < e.words.size(); ++i) {
        if (e.words[i] != 0)
            bits = 64 * i + (64 - static_cast<std::uint64_t>(std::countl_zero(e.words[i])));
        ones += static_cast<std::uint64_t>(std::popcount(e.words[i]));
    }
    return bits == 0 ? 0 : (bits - 1) + (ones - 1);
}

}  // namespace comkex::dh
