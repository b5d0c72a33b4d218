#include "doctest.h"

#include "comkex/codec.hpp"
#include "comkex/commutant.hpp"
#include "comkex/errors.hpp"
#include "oracles.hpp"

using namespace comkex;
using testing::error_of;

namespace {

const BlockShape kShapes[] = {{1, 2}, {2, 2}, {3, 2}, {1, 3}, {2, 3}, {3, 3}, {4, 2}};
constexpr std::uint64_t kPrimes[] = {2, 7, 101, 2147483647};

DeltaElement gamma(std::uint64_t s, std::size_t k)
{
    return build_delta(DeltaKind::Gamma, Fp(s), k);
}
DeltaElement lambda(std::uint64_t s, std::size_t k)
{
    return build_delta(DeltaKind::Lambda, Fp(s), k);
}

// Element of Q(A): a random sum of products of embedded K[N] elements.
Matrix random_qa(const Field& f, BlockShape shape, Rng& rng)
{
    Matrix acc(shape.m(), shape.m());
    for (std::uint64_t t = 0, terms = 1 + rng.below(3); t < terms; ++t) {
        Matrix prod = embed_block_diag(NilPoly::sample(f, shape.k, rng), shape.d);
        for (std::uint64_t p = 0, n = rng.below(3); p < n; ++p)
            prod = mat_mul(f, prod, embed_block_diag(NilPoly::sample(f, shape.k, rng), shape.d));
        acc = mat_add(f, acc, prod);
    }
    return acc;
}

}  // namespace

TEST_CASE("build_delta realizations")
{
    Field f(7);
    CHECK(gamma(3, 2).realize() == Matrix::from_rows(f, {{3, 0}, {0, 3}}));
    CHECK(lambda(2, 2).realize() == Matrix::from_rows(f, {{2, 1}, {0, 2}}));
    CHECK(lambda(0, 3).realize() == Matrix::from_rows(f, {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}));
    CHECK(lambda(5, 1).realize() == Matrix::from_rows(f, {{5}}));
    CHECK(error_of([] { (void)build_delta(DeltaKind::Gamma, Fp(1), 0); }) == Errc::InvalidDimension);
}

TEST_CASE("Delta elements commute pairwise")
{
    Rng rng(1);
    for (std::uint64_t q : kPrimes) {
        Field f(q);
        for (std::size_t k = 1; k <= 5; ++k) {
            for (int i = 0; i < 40; ++i) {
                const auto a = build_delta(rng.below(2) ? DeltaKind::Lambda : DeltaKind::Gamma, f.sample(rng), k);
                const auto b = build_delta(rng.below(2) ? DeltaKind::Lambda : DeltaKind::Gamma, f.sample(rng), k);
                CHECK(check_commute(f, a.realize(), b.realize()));
            }
        }
    }
}

TEST_CASE("embed_block_diag examples")
{
    Field f(7);
    CHECK(embed_block_diag(NilPoly({Fp(1), Fp(0)}), 2) == Matrix::identity(4));
    CHECK(embed_block_diag(NilPoly({Fp(2), Fp(1)}), 2) ==
          Matrix::from_rows(f, {{2, 1, 0, 0}, {0, 2, 0, 0}, {0, 0, 2, 1}, {0, 0, 0, 2}}));
    CHECK(embed_block_diag(NilPoly::zero(3), 2).is_zero());
    CHECK(error_of([] { (void)embed_block_diag(NilPoly::identity(2), 0); }) == Errc::InvalidDimension);
}

TEST_CASE("NilPoly products are truncated convolutions")
{
    Rng rng(2);
    for (std::uint64_t q : kPrimes) {
        Field f(q);
        for (std::size_t k = 1; k <= 6; ++k) {
            for (int i = 0; i < 20; ++i) {
                const NilPoly a = NilPoly::sample(f, k, rng);
                const NilPoly b = NilPoly::sample(f, k, rng);
                CHECK(nil_mul(f, a, b).realize() == mat_mul(f, a.realize(), b.realize()));
                CHECK(nil_add(f, a, b).realize() == mat_add(f, a.realize(), b.realize()));
            }
        }
    }
}

TEST_CASE("build_b_element assembles blockwise")
{
    Field f(7);
    CHECK(BElement({{gamma(0, 2), gamma(0, 2)}, {gamma(0, 2), gamma(0, 2)}}).realize().is_zero());
    CHECK(BElement({{gamma(1, 1), gamma(1, 1)}, {gamma(0, 1), gamma(1, 1)}}).realize() ==
          Matrix::from_rows(f, {{1, 1}, {0, 1}}));

    // Independent assembly: entry (r, c) read off the block's definition.
    const std::vector<std::vector<DeltaElement>> grid = {{lambda(3, 2), gamma(5, 2)}, {gamma(6, 2), lambda(0, 2)}};
    oracle::Mat expect(4, oracle::Vec(4, 0));
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            const auto& blk = grid[r / 2][c / 2];
            const std::size_t i = r % 2, j = c % 2;
            if (i == j)
                expect[r][c] = blk.scalar.value;
            else if (blk.kind == DeltaKind::Lambda && j == i + 1)
                expect[r][c] = 1;
        }
    }
    CHECK(expect == oracle::Mat{{3, 1, 5, 0}, {0, 3, 0, 5}, {6, 0, 0, 1}, {0, 6, 0, 0}});
    CHECK(oracle::from(BElement(grid).realize()) == expect);

    CHECK(error_of([] { BElement b({{gamma(1, 2), gamma(1, 2)}, {gamma(1, 2)}}); }) == Errc::DimensionMismatch);
    CHECK(error_of([] { BElement b({{gamma(1, 2), gamma(1, 3)}, {gamma(1, 2), gamma(1, 2)}}); }) ==
          Errc::DimensionMismatch);
}

TEST_CASE("every A element commutes with every B element")
{
    Rng rng(3);
    std::size_t pairs = 0;
    for (std::uint64_t q : kPrimes) {
        Field f(q);
        for (auto shape : kShapes) {
            for (int i = 0; i < 40; ++i, ++pairs) {
                const AElement a{NilPoly::sample(f, shape.k, rng), shape.d};
                const BElement b = BElement::sample(f, shape, rng);
                REQUIRE(check_commute(f, a.realize(), b.realize()));
            }
        }
    }
    CHECK(pairs >= 1000);
}

TEST_CASE("B elements do not commute in general")
{
    Field f(7);
    for (std::size_t k = 1; k <= 4; ++k) {
        for (std::size_t d = 2; d <= 4; ++d) {
            std::vector<std::vector<DeltaElement>> upper(d, std::vector<DeltaElement>(d, gamma(0, k)));
            auto lower = upper;
            upper[0][1] = gamma(1, k);
            lower[1][0] = gamma(1, k);
            CHECK_FALSE(check_commute(f, BElement(upper).realize(), BElement(lower).realize()));
        }
    }

    // k = 1, d = 2 written out.
    const Matrix a = Matrix::from_rows(f, {{0, 1}, {0, 0}});
    const Matrix b = Matrix::from_rows(f, {{0, 0}, {1, 0}});
    CHECK(oracle::mul(oracle::from(a), oracle::from(b), 7) != oracle::mul(oracle::from(b), oracle::from(a), 7));
    CHECK_FALSE(check_commute(f, a, b));
    CHECK(check_commute(f, Matrix::identity(2), a));
    CHECK(error_of([&] { (void)check_commute(f, a, Matrix::identity(3)); }) == Errc::DimensionMismatch);
}

TEST_CASE("sample_z")
{
    Field f(101);
    const BlockShape shape{2, 2};
    Rng rng(4);

    SUBCASE("a single factor with exponent one is that B element")
    {
        const BElement b = BElement::sample(f, shape, rng);
        const ZElement z = z_from_recipe(f, shape, {MonoTerm{Fp(1), {MonoFactor{b, 1}}}});
        CHECK(z.matrix == b.realize());
    }

    SUBCASE("deterministic under a fixed seed")
    {
        Rng a(77), b(77);
        const ZElement za = sample_z(f, shape, a);
        const ZElement zb = sample_z(f, shape, b);
        CHECK(za.matrix == zb.matrix);
        CHECK(codec::to_json(za) == codec::to_json(zb));
    }

    SUBCASE("recipe shape bounds")
    {
        for (int i = 0; i < 100; ++i) {
            const ZElement z = sample_z(f, shape, rng);
            CHECK(z.recipe.size() >= 1);
            CHECK(z.recipe.size() <= 4);
            for (const auto& term : z.recipe) {
                CHECK(term.factors.size() >= 1);
                CHECK(term.factors.size() <= 3);
                for (const auto& fac : term.factors)
                    CHECK(fac.exponent <= 3);
            }
            CHECK_FALSE(is_degenerate_z(f, shape, z.matrix));
        }
    }

    SUBCASE("a single block column cannot leave K[N]")
    {
        CHECK(error_of([&] { (void)sample_z(f, BlockShape{2, 1}, rng); }) == Errc::DegenerateZ);
    }

    SUBCASE("degeneracy rules")
    {
        CHECK(is_degenerate_z(f, shape, embed_block_diag(NilPoly({Fp(4), Fp(9)}), 2)));
        CHECK(is_degenerate_z(f, shape, Matrix(4, 4)));
        // z e_1 = e_1 for an upper-triangular z with unit (0,0) entry.
        const Matrix upper = Matrix::from_rows(f, {{1, 2, 3, 4}, {0, 1, 5, 6}, {0, 0, 1, 7}, {0, 0, 0, 1}});
        const Vector e1 = testing::vec(f, {1, 0, 0, 0});
        CHECK_FALSE(is_degenerate_z(f, shape, upper));
        CHECK(is_degenerate_z(f, shape, upper, &e1));
    }
}

TEST_CASE("sampled z commutes with the whole of Q(A)")
{
    Rng rng(5);
    std::size_t checks = 0;
    for (std::uint64_t q : kPrimes) {
        Field f(q);
        for (auto shape : kShapes) {
            for (int i = 0; i < 10; ++i) {
                ZElement z;
                try {
                    z = sample_z(f, shape, rng);
                } catch (const Error&) {
                    REQUIRE(q == 2);  // tiny fields can exhaust the retries
                    continue;
                }
                // Q(B) members: z, z^2 and z times another sample.
                Matrix other = z.matrix;
                if (auto w = error_of([&] { other = sample_z(f, shape, rng).matrix; }); w)
                    other = z.matrix;
                const Matrix members[] = {z.matrix, mat_mul(f, z.matrix, z.matrix), mat_mul(f, z.matrix, other)};
                for (const auto& member : members) {
                    for (int j = 0; j < 10; ++j, ++checks) {
                        const Matrix a = random_qa(f, shape, rng);
                        REQUIRE(mat_mul(f, member, a) == mat_mul(f, a, member));
                    }
                }
            }
        }
    }
    CHECK(checks >= 1000);
}

TEST_CASE("eval_poly_in_z")
{
    Field f(7);
    const BlockShape shape{1, 2};
    const Matrix z = Matrix::from_rows(f, {{1, 1}, {0, 1}});

    const NilPoly one[] = {NilPoly::identity(1)};
    CHECK(eval_poly_in_z(f, one, z, shape) == Matrix::identity(2));

    const NilPoly coeffs[] = {NilPoly({Fp(2)}), NilPoly({Fp(3)})};
    const oracle::Mat expect = oracle::add(oracle::scale(2, oracle::identity(2), 7),
                                           oracle::scale(3, oracle::from(z), 7), 7);
    CHECK(expect == oracle::Mat{{5, 3}, {0, 5}});
    CHECK(oracle::from(eval_poly_in_z(f, coeffs, z, shape)) == expect);

    CHECK(error_of([&] { (void)eval_poly_in_z(f, std::span<const NilPoly>{}, z, shape); }) ==
          Errc::InvalidDimension);
    const NilPoly wrong[] = {NilPoly::identity(2)};
    CHECK(error_of([&] { (void)eval_poly_in_z(f, wrong, z, shape); }) == Errc::DimensionMismatch);
}

TEST_CASE("eval_poly_in_z matches explicit power expansion")
{
    Rng rng(6);
    for (std::uint64_t q : kPrimes) {
        Field f(q);
        for (auto shape : kShapes) {
            ZElement z;
            if (error_of([&] { z = sample_z(f, shape, rng); }))
                continue;
            std::vector<NilPoly> coeffs;
            for (int i = 0; i < 4; ++i)
                coeffs.push_back(NilPoly::sample(f, shape.k, rng));

            oracle::Mat expect(shape.m(), oracle::Vec(shape.m(), 0));
            oracle::Mat power = oracle::identity(shape.m());
            for (const auto& a : coeffs) {
                expect = oracle::add(expect, oracle::mul(oracle::from(embed_block_diag(a, shape.d)), power, q), q);
                power = oracle::mul(power, oracle::from(z.matrix), q);
            }
            CHECK(oracle::from(eval_poly_in_z(f, coeffs, z.matrix, shape)) == expect);
        }
    }
}

TEST_CASE("polynomials in a shared z commute")
{
    Rng rng(7);
    std::size_t pairs = 0;
    for (std::uint64_t q : kPrimes) {
        Field f(q);
        for (auto shape : kShapes) {
            ZElement z;
            if (error_of([&] { z = sample_z(f, shape, rng); }))
                continue;
            for (int i = 0; i < 40; ++i, ++pairs) {
                std::vector<NilPoly> c1, c2;
                for (std::uint64_t j = 0, n = 1 + rng.below(4); j < n; ++j)
                    c1.push_back(NilPoly::sample(f, shape.k, rng));
                for (std::uint64_t j = 0, n = 1 + rng.below(4); j < n; ++j)
                    c2.push_back(NilPoly::sample(f, shape.k, rng));
                const Matrix t1 = eval_poly_in_z(f, c1, z.matrix, shape);
                const Matrix t2 = eval_poly_in_z(f, c2, z.matrix, shape);
                REQUIRE(check_commute(f, t1, t2));
                REQUIRE(check_commute(f, t1, z.matrix));
            }
        }
    }
    CHECK(pairs >= 1000);
}

TEST_CASE("keygen_power_basis")
{
    Field f(7);
    const Matrix a = Matrix::from_rows(f, {{1, 1}, {0, 1}});
    const Fp c0[] = {Fp(1)};
    const Fp c1[] = {Fp(0), Fp(1)};
    const Fp c2[] = {Fp(1), Fp(1)};
    CHECK(keygen_power_basis(f, a, c0) == Matrix::identity(2));
    CHECK(keygen_power_basis(f, a, c1) == a);
    CHECK(oracle::add(oracle::identity(2), oracle::from(a), 7) == oracle::Mat{{2, 1}, {0, 2}});
    CHECK(keygen_power_basis(f, a, c2) == Matrix::from_rows(f, {{2, 1}, {0, 2}}));
    CHECK(error_of([&] { (void)keygen_power_basis(f, Matrix(2, 3), c2); }) == Errc::DimensionMismatch);
}

TEST_CASE("qz_basis spans the keys of bounded degree")
{
    Field f(101);
    const BlockShape shape{2, 3};
    Rng rng(8);
    const ZElement z = sample_z(f, shape, rng);
    const auto basis = qz_basis(f, z.matrix, shape, 2);
    REQUIRE(basis.size() == 6);

    std::vector<NilPoly> coeffs;
    for (int i = 0; i < 3; ++i)
        coeffs.push_back(NilPoly::sample(f, 2, rng));
    Matrix combo(6, 6);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            combo = mat_add(f, combo, mat_scale(f, coeffs[i][j], basis[i * 2 + j]));
    CHECK(combo == eval_poly_in_z(f, coeffs, z.matrix, shape));
}
