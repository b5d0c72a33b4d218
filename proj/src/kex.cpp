#include "comkex/kex.hpp"

#include <string>
#include <utility>

#include "comkex/errors.hpp"

namespace comkex {

namespace {

bool is_scalar_matrix(const Matrix& t)
{
    const Fp s = t(0, 0);
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j)
            if (t(i, j) != (i == j ? s : Fp(0)))
                return false;
    return true;
}

std::vector<NilPoly> sample_coeffs(const PublicParams& params, Rng& rng)
{
    std::vector<NilPoly> coeffs;
    coeffs.reserve(params.degree + 1);
    for (std::size_t i = 0; i <= params.degree; ++i)
        coeffs.push_back(NilPoly::sample(params.field, params.shape.k, rng));
    return coeffs;
}

}  // namespace

void validate_params(const PublicParams& params)
{
    const auto& [k, d] = params.shape;
    if (k == 0)
        fail(Errc::InvalidParams, "block size k must be at least 1");
    if (d < 2)
        fail(Errc::InvalidParams, "block count d must be at least 2");
    if (params.degree == 0)
        fail(Errc::InvalidParams, "degree bound must be at least 1");
    const std::size_t m = params.m();
    if (params.zeta.size() != m)
        fail(Errc::InvalidParams, "zeta has length " + std::to_string(params.zeta.size()) + ", expected " +
                                      std::to_string(m));
    for (Fp x : params.zeta)
        if (!params.field.is_canonical(x))
            fail(Errc::InvalidParams, "zeta entry out of range");
    if (is_zero(params.zeta))
        fail(Errc::InvalidParams, "zeta is zero");
    if (params.z.matrix.rows() != m || params.z.matrix.cols() != m)
        fail(Errc::InvalidParams, "z is not m x m");
    for (Fp x : params.z.matrix.entries())
        if (!params.field.is_canonical(x))
            fail(Errc::InvalidParams, "z entry out of range");
    if (is_degenerate_z(params.field, params.shape, params.z.matrix, &params.zeta))
        fail(Errc::InvalidParams, "z is degenerate");
}

PublicParams gen_params(std::uint64_t q, std::size_t k, std::size_t d, std::size_t degree, Rng& rng)
{
    Field field(q);
    if (k == 0)
        fail(Errc::InvalidParams, "block size k must be at least 1");
    if (d < 2)
        fail(Errc::InvalidParams, "block count d must be at least 2");
    if (degree == 0)
        fail(Errc::InvalidParams, "degree bound must be at least 1");

    const BlockShape shape{k, d};
    Vector zeta(shape.m());
    do {
        for (auto& x : zeta)
            x = field.sample(rng);
    } while (is_zero(zeta));

    ZElement z = sample_z(field, shape, rng, &zeta);
    return PublicParams{field, shape, degree, std::move(zeta), std::move(z), std::nullopt};
}

PrivateKey private_key_from_coeffs(const PublicParams& params, std::vector<NilPoly> coeffs)
{
    Matrix t = eval_poly_in_z(params.field, coeffs, params.z.matrix, params.shape);
    return PrivateKey{std::move(coeffs), std::move(t)};
}

PublicKey public_key_of(const PublicParams& params, const PrivateKey& key)
{
    return PublicKey{mat_apply(params.field, key.t, params.zeta)};
}

KeyPair keygen(const PublicParams& params, Rng& rng)
{
    for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
        PrivateKey priv = private_key_from_coeffs(params, sample_coeffs(params, rng));
        PublicKey pub = public_key_of(params, priv);
        if (is_zero(pub.xi) || is_scalar_matrix(priv.t))
            continue;
        return KeyPair{std::move(priv), std::move(pub)};
    }
    fail(Errc::DegenerateKey, "no usable key after " + std::to_string(kMaxSampleAttempts) + " attempts");
}

SharedKey derive_shared(const PublicParams& params, const PrivateKey& key, const PublicKey& peer)
{
    const std::size_t m = params.m();
    if (peer.xi.size() != m || key.t.rows() != m || key.t.cols() != m)
        fail(Errc::DimensionMismatch, "key material does not match m = " + std::to_string(m));
    return SharedKey{mat_apply(params.field, key.t, peer.xi)};
}

std::vector<std::uint8_t> SharedKey::to_bytes() const
{
    return encode_be(kappa);
}

std::vector<std::uint8_t> encode_be(std::span<const Fp> v)
{
    std::vector<std::uint8_t> out;
    out.reserve(v.size() * 8);
    for (Fp x : v)
        for (int shift = 56; shift >= 0; shift -= 8)
            out.push_back(static_cast<std::uint8_t>(x.value >> shift));
    return out;
}

Vector decode_be(std::span<const std::uint8_t> bytes, const Field& field)
{
    if (bytes.size() % 8 != 0)
        throw Error(Errc::ParseError, "byte length " + std::to_string(bytes.size()) + " is not a multiple of 8",
                    bytes.size());
    Vector out(bytes.size() / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t v = 0;
        for (std::size_t b = 0; b < 8; ++b)
            v = (v << 8) | bytes[i * 8 + b];
        if (v >= field.modulus())
            throw Error(Errc::ParseError, "entry " + std::to_string(i) + " is not below q", i * 8);
        out[i] = Fp(v);
    }
    return out;
}

OpCounter count_ops(OpAction action, const PublicParams& params)
{
    // Fixed stream so repeated reports agree.
    Rng rng(0x636f756e745f6f70ULL);
    OpCounter counter;
    PublicParams counted = params;
    counted.field = params.field.counting(counter);

    switch (action) {
    case OpAction::Keygen: {
        auto coeffs = sample_coeffs(params, rng);
        PrivateKey priv = private_key_from_coeffs(counted, std::move(coeffs));
        (void)public_key_of(counted, priv);
        break;
    }
    case OpAction::DeriveShared: {
        KeyPair self = keygen(params, rng);
        KeyPair peer = keygen(params, rng);
        (void)derive_shared(counted, self.priv, peer.pub);
        break;
    }
    }
    return counter;
}

OpCounter predicted_ops(OpAction action, const PublicParams& params)
{
    const std::uint64_t m = params.m();
    const std::uint64_t deg = params.degree;
    switch (action) {
    case OpAction::Keygen:
        return OpCounter{deg * m * m * m + m * m, deg * (m * m * (m - 1) + m * m) + m * (m - 1)};
    case OpAction::DeriveShared:
        return OpCounter{m * m, m * (m - 1)};
    }
    return {};
}

}  // namespace comkex
