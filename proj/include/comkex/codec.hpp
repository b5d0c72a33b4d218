#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "comkex/commutant.hpp"
#include "comkex/kex.hpp"
#include "comkex/linalg.hpp"

// JSON forms of the library types. Field elements and other integers are
// decimal strings; matrix extents ("rows", "cols") are JSON numbers.
//
//   vector    {"entries": ["1", "2"]}
//   matrix    {"rows": 2, "cols": 2, "entries": [... row-major ...]}
//   NilPoly   {"coeffs": [...]}
//   z         {"matrix": <matrix>, "recipe": [<term>...]}   recipe optional
//   term      {"coeff": "3", "factors": [{"exponent": "2", "blocks": [[<delta>...]...]}]}
//   delta     {"kind": "gamma" | "lambda", "scalar": "5"}
//   params    {"q", "k", "d", "D", "zeta": <vector>, "z": <z>, "seed"?}
//   key       {"coeffs": [<NilPoly>...], "T": <matrix>}
//   pub       {"xi": <vector>}
//
// Parse failures throw Error(ParseError) naming the offending JSON path;
// syntax errors also carry the byte offset.

namespace comkex::codec {

using Json = nlohmann::json;

/// Throws ParseError with the byte offset of the first syntax error.
Json parse_document(std::string_view text);
/// Two-space indented dump with sorted keys and a trailing newline.
std::string dump(const Json& j);

Json to_json(std::span<const Fp> v);
Json to_json(const Matrix& m);
Json to_json(const NilPoly& p);
Json to_json(const ZElement& z);
Json to_json(const PublicParams& params);
Json to_json(const PrivateKey& key);
Json to_json(const PublicKey& pub);

Fp parse_fp(const Json& j, const Field& field, const std::string& path);
std::uint64_t parse_uint(const Json& j, const std::string& path);
Vector parse_vector(const Json& j, const Field& field, const std::string& path);
Matrix parse_matrix(const Json& j, const Field& field, const std::string& path);
NilPoly parse_nilpoly(const Json& j, const Field& field, const std::string& path);
ZElement parse_z(const Json& j, const Field& field, BlockShape shape, const std::string& path);

/// Also validates the params (InvalidParams on failure).
PublicParams parse_params(const Json& j);
/// Recomputes T from coeffs and rejects a mismatching "T".
PrivateKey parse_private_key(const Json& j, const PublicParams& params);
PublicKey parse_public_key(const Json& j, const PublicParams& params);

}  // namespace comkex::codec
