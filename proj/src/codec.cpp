#include "comkex/codec.hpp"

#include <charconv>
#include <utility>

#include "comkex/errors.hpp"

namespace comkex::codec {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what)
{
    throw Error(Errc::ParseError, path + ": " + what);
}

const Json& member(const Json& j, const char* key, const std::string& path)
{
    if (!j.is_object())
        bad(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end())
        bad(path, std::string("missing \"") + key + "\"");
    return *it;
}

const Json& array_at(const Json& j, const std::string& path)
{
    if (!j.is_array())
        bad(path, "expected an array");
    return j;
}

std::string dec(std::uint64_t v)
{
    return std::to_string(v);
}

std::size_t parse_extent(const Json& j, const std::string& path)
{
    if (!j.is_number_unsigned() || j.get<std::uint64_t>() == 0)
        bad(path, "expected a positive integer");
    return j.get<std::size_t>();
}

}  // namespace

Json parse_document(std::string_view text)
{
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw Error(Errc::ParseError, e.what(), e.byte);
    }
}

std::string dump(const Json& j)
{
    return j.dump(2) + "\n";
}

Json to_json(std::span<const Fp> v)
{
    Json entries = Json::array();
    for (Fp x : v)
        entries.push_back(dec(x.value));
    return Json{{"entries", std::move(entries)}};
}

Json to_json(const Matrix& m)
{
    Json entries = Json::array();
    for (Fp x : m.entries())
        entries.push_back(dec(x.value));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

Json to_json(const NilPoly& p)
{
    Json coeffs = Json::array();
    for (Fp x : p.coeffs())
        coeffs.push_back(dec(x.value));
    return Json{{"coeffs", std::move(coeffs)}};
}

Json to_json(const ZElement& z)
{
    Json out{{"matrix", to_json(z.matrix)}};
    if (z.recipe.empty())
        return out;
    Json terms = Json::array();
    for (const auto& term : z.recipe) {
        Json factors = Json::array();
        for (const auto& f : term.factors) {
            const auto shape = f.base.shape();
            Json grid = Json::array();
            for (std::size_t r = 0; r < shape.d; ++r) {
                Json row = Json::array();
                for (std::size_t c = 0; c < shape.d; ++c) {
                    const auto& blk = f.base.block(r, c);
                    row.push_back(Json{{"kind", blk.kind == DeltaKind::Gamma ? "gamma" : "lambda"},
                                       {"scalar", dec(blk.scalar.value)}});
                }
                grid.push_back(std::move(row));
            }
            factors.push_back(Json{{"exponent", dec(f.exponent)}, {"blocks", std::move(grid)}});
        }
        terms.push_back(Json{{"coeff", dec(term.coeff.value)}, {"factors", std::move(factors)}});
    }
    out["recipe"] = std::move(terms);
    return out;
}

Json to_json(const PublicParams& params)
{
    Json out{{"q", dec(params.field.modulus())},
             {"k", dec(params.shape.k)},
             {"d", dec(params.shape.d)},
             {"D", dec(params.degree)},
             {"zeta", to_json(params.zeta)},
             {"z", to_json(params.z)}};
    if (params.seed)
        out["seed"] = dec(*params.seed);
    return out;
}

Json to_json(const PrivateKey& key)
{
    Json coeffs = Json::array();
    for (const auto& a : key.coeffs)
        coeffs.push_back(to_json(a));
    return Json{{"coeffs", std::move(coeffs)}, {"T", to_json(key.t)}};
}

Json to_json(const PublicKey& pub)
{
    return Json{{"xi", to_json(pub.xi)}};
}

std::uint64_t parse_uint(const Json& j, const std::string& path)
{
    if (!j.is_string())
        bad(path, "expected a decimal string");
    const auto& s = j.get_ref<const std::string&>();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        bad(path, "\"" + s + "\" is not a decimal integer");
    return v;
}

Fp parse_fp(const Json& j, const Field& field, const std::string& path)
{
    const std::uint64_t v = parse_uint(j, path);
    if (v >= field.modulus())
        bad(path, dec(v) + " is not below q = " + dec(field.modulus()));
    return Fp(v);
}

Vector parse_vector(const Json& j, const Field& field, const std::string& path)
{
    const auto& entries = array_at(member(j, "entries", path), path + "/entries");
    Vector v;
    v.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        v.push_back(parse_fp(entries[i], field, path + "/entries/" + dec(i)));
    return v;
}

Matrix parse_matrix(const Json& j, const Field& field, const std::string& path)
{
    const std::size_t rows = parse_extent(member(j, "rows", path), path + "/rows");
    const std::size_t cols = parse_extent(member(j, "cols", path), path + "/cols");
    const auto& entries = array_at(member(j, "entries", path), path + "/entries");
    if (entries.size() != rows * cols)
        bad(path + "/entries", "expected " + dec(rows * cols) + " entries, found " + dec(entries.size()));
    std::vector<Fp> e;
    e.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        e.push_back(parse_fp(entries[i], field, path + "/entries/" + dec(i)));
    return Matrix(rows, cols, std::move(e));
}

NilPoly parse_nilpoly(const Json& j, const Field& field, const std::string& path)
{
    const auto& coeffs = array_at(member(j, "coeffs", path), path + "/coeffs");
    if (coeffs.empty())
        bad(path + "/coeffs", "empty");
    std::vector<Fp> c;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        c.push_back(parse_fp(coeffs[i], field, path + "/coeffs/" + dec(i)));
    return NilPoly(std::move(c));
}

ZElement parse_z(const Json& j, const Field& field, BlockShape shape, const std::string& path)
{
    Matrix matrix = parse_matrix(member(j, "matrix", path), field, path + "/matrix");
    if (!j.contains("recipe"))
        return ZElement{std::move(matrix), {}};

    const auto& terms = array_at(j["recipe"], path + "/recipe");
    std::vector<MonoTerm> recipe;
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const std::string tp = path + "/recipe/" + dec(t);
        MonoTerm term;
        term.coeff = parse_fp(member(terms[t], "coeff", tp), field, tp + "/coeff");
        const auto& factors = array_at(member(terms[t], "factors", tp), tp + "/factors");
        for (std::size_t fi = 0; fi < factors.size(); ++fi) {
            const std::string fp = tp + "/factors/" + dec(fi);
            const std::uint64_t exponent = parse_uint(member(factors[fi], "exponent", fp), fp + "/exponent");
            if (exponent > 64)
                bad(fp + "/exponent", "exponent above 64");
            const auto& grid = array_at(member(factors[fi], "blocks", fp), fp + "/blocks");
            if (grid.size() != shape.d)
                bad(fp + "/blocks", "expected " + dec(shape.d) + " block rows");
            std::vector<std::vector<DeltaElement>> blocks;
            for (std::size_t r = 0; r < grid.size(); ++r) {
                const auto& row = array_at(grid[r], fp + "/blocks/" + dec(r));
                if (row.size() != shape.d)
                    bad(fp + "/blocks/" + dec(r), "expected " + dec(shape.d) + " blocks");
                auto& out_row = blocks.emplace_back();
                for (std::size_t c = 0; c < row.size(); ++c) {
                    const std::string bp = fp + "/blocks/" + dec(r) + "/" + dec(c);
                    const auto& kind = member(row[c], "kind", bp);
                    DeltaKind dk;
                    if (kind == "gamma")
                        dk = DeltaKind::Gamma;
                    else if (kind == "lambda")
                        dk = DeltaKind::Lambda;
                    else
                        bad(bp + "/kind", "expected \"gamma\" or \"lambda\"");
                    out_row.push_back(
                        build_delta(dk, parse_fp(member(row[c], "scalar", bp), field, bp + "/scalar"), shape.k));
                }
            }
            term.factors.push_back(MonoFactor{BElement(blocks), static_cast<unsigned>(exponent)});
        }
        recipe.push_back(std::move(term));
    }
    if (recipe.empty())
        bad(path + "/recipe", "empty");
    ZElement z = z_from_recipe(field, shape, std::move(recipe));
    if (z.matrix != matrix)
        bad(path, "recipe does not evaluate to the stated matrix");
    return z;
}

PublicParams parse_params(const Json& j)
{
    const std::uint64_t q = parse_uint(member(j, "q", ""), "/q");
    const std::uint64_t k = parse_uint(member(j, "k", ""), "/k");
    const std::uint64_t d = parse_uint(member(j, "d", ""), "/d");
    const std::uint64_t degree = parse_uint(member(j, "D", ""), "/D");
    Field field(q);
    if (k == 0 || d < 2 || degree == 0 || k > 4096 || d > 4096)
        fail(Errc::InvalidParams, "need k >= 1, d >= 2, D >= 1 (k, d at most 4096)");
    const BlockShape shape{k, d};

    Vector zeta = parse_vector(member(j, "zeta", ""), field, "/zeta");
    ZElement z = parse_z(member(j, "z", ""), field, shape, "/z");
    std::optional<std::uint64_t> seed;
    if (j.contains("seed"))
        seed = parse_uint(j["seed"], "/seed");

    PublicParams params{field, shape, degree, std::move(zeta), std::move(z), seed};
    validate_params(params);
    return params;
}

PrivateKey parse_private_key(const Json& j, const PublicParams& params)
{
    const auto& coeffs = array_at(member(j, "coeffs", ""), "/coeffs");
    if (coeffs.empty())
        bad("/coeffs", "empty");
    std::vector<NilPoly> polys;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        NilPoly p = parse_nilpoly(coeffs[i], params.field, "/coeffs/" + dec(i));
        if (p.size() != params.shape.k)
            bad("/coeffs/" + dec(i), "expected " + dec(params.shape.k) + " coefficients");
        polys.push_back(std::move(p));
    }
    PrivateKey key = private_key_from_coeffs(params, std::move(polys));
    Matrix stated = parse_matrix(member(j, "T", ""), params.field, "/T");
    if (stated != key.t)
        bad("/T", "does not equal the polynomial evaluated at z");
    return key;
}

PublicKey parse_public_key(const Json& j, const PublicParams& params)
{
    Vector xi = parse_vector(member(j, "xi", ""), params.field, "/xi");
    if (xi.size() != params.m())
        bad("/xi", "expected " + dec(params.m()) + " entries, found " + dec(xi.size()));
    return PublicKey{std::move(xi)};
}

}  // namespace comkex::codec
