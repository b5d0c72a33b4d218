#include "comkex/bench.hpp"

#include <bit>
#include <chrono>

#include "comkex/errors.hpp"

namespace comkex {

namespace {

template <typename Fn>
std::uint64_t mean_ns(std::size_t reps, Fn&& fn)
{
    reps = reps == 0 ? 1 : reps;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < reps; ++i)
        fn();
    const auto elapsed = std::chrono::steady_clock::now() - start;
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed).count()) / reps;
}

}  // namespace

std::size_t bit_length(std::uint64_t v) noexcept
{
    return static_cast<std::size_t>(64 - std::countl_zero(v));
}

const BenchEntry& BenchReport::entry(const std::string& system) const
{
    for (const auto& e : entries)
        if (e.system == system)
            return e;
    fail(Errc::InvalidParams, "no bench entry for " + system);
}

double BenchReport::mul_ratio() const
{
    return static_cast<double>(entry("diffie-hellman").muls) / static_cast<double>(entry("commutant-kex").muls);
}

codec::Json BenchReport::to_json() const
{
    codec::Json list = codec::Json::array();
    for (const auto& e : entries)
        list.push_back(codec::Json{{"system", e.system},
                                   {"m_or_p_bits", e.m_or_p_bits},
                                   {"public_key_bits", e.public_key_bits},
                                   {"muls", e.muls},
                                   {"adds", e.adds},
                                   {"wall_ns", e.wall_ns}});
    return codec::Json{{"entries", std::move(list)}, {"dh_over_commutant_muls", mul_ratio()}};
}

BenchReport run_bench(const BenchConfig& config)
{
    Rng rng(config.seed);
    const PublicParams params = gen_params(config.q, config.k, config.d, config.degree, rng);
    const KeyPair alice = keygen(params, rng);
    const KeyPair bob = keygen(params, rng);

    BenchReport report;

    BenchEntry kex{"commutant-kex"};
    kex.m_or_p_bits = params.m();
    kex.public_key_bits = params.m() * bit_length(config.q);
    OpCounter counter;
    {
        PublicParams counted = params;
        counted.field = params.field.counting(counter);
        (void)derive_shared(counted, alice.priv, bob.pub);
    }
    kex.muls = counter.mul_count;
    kex.adds = counter.add_count;
    kex.wall_ns = mean_ns(config.repetitions, [&] { (void)derive_shared(params, alice.priv, bob.pub); });
    report.entries.push_back(kex);

    dh::validate(config.dh);
    const std::size_t bits = config.dh_exponent_bits.value_or(kex.public_key_bits);
    const auto a = dh::dh_keygen_bits(config.dh, bits, rng);
    const auto b = dh::dh_keygen_bits(config.dh, bits, rng);

    BenchEntry dhe{"diffie-hellman"};
    dhe.m_or_p_bits = bits;
    dhe.public_key_bits = bits;
    OpCounter dh_counter;
    const Fp shared = dh::dh_shared(config.dh, a.secret, b.pub.value, &dh_counter);
    if (shared != dh::dh_shared(config.dh, b.secret, a.pub.value))
        fail(Errc::InvalidParams, "Diffie-Hellman baseline disagreed");
    dhe.muls = dh_counter.mul_count;
    dhe.adds = dh_counter.add_count;
    dhe.wall_ns = mean_ns(config.repetitions, [&] { (void)dh::dh_shared(config.dh, a.secret, b.pub.value); });
    report.entries.push_back(dhe);
    return report;
}

}  // namespace comkex
