#include "comkex/attacks.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "comkex/errors.hpp"

namespace comkex {

namespace {

void require_length(const PublicParams& params, const PublicKey& pub, const char* what)
{
    if (pub.xi.size() != params.m())
        fail(Errc::DimensionMismatch, std::string(what) + " has length " + std::to_string(pub.xi.size()) +
                                          ", expected " + std::to_string(params.m()));
}

// Splits a flat coefficient vector, i-major, into per-power NilPolys.
std::vector<NilPoly> to_polys(const Vector& flat, std::size_t k)
{
    std::vector<NilPoly> out;
    for (std::size_t i = 0; i < flat.size(); i += k)
        out.emplace_back(Vector(flat.begin() + static_cast<std::ptrdiff_t>(i),
                                flat.begin() + static_cast<std::ptrdiff_t>(i + k)));
    return out;
}

// Stacks the conditions basis_b * inputs[e] = outputs[e] into one system in
// the basis coefficients: row block e holds the columns basis_b * inputs[e].
SolveResult solve_in_basis(const Field& f, const std::vector<Matrix>& basis, const std::vector<Vector>& inputs,
                           const std::vector<Vector>& outputs)
{
    const std::size_t m = inputs.front().size();
    Matrix a(inputs.size() * m, basis.size());
    Vector rhs;
    rhs.reserve(inputs.size() * m);
    for (std::size_t e = 0; e < inputs.size(); ++e) {
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const Vector col = mat_apply(f, basis[b], inputs[e]);
            for (std::size_t r = 0; r < m; ++r)
                a(e * m + r, b) = col[r];
        }
        rhs.insert(rhs.end(), outputs[e].begin(), outputs[e].end());
    }
    return solve_linear(f, a, rhs);
}

}  // namespace

std::size_t KeyDirectory::known_private() const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.priv.has_value(); }));
}

std::size_t KeyDirectory::rank(const PublicParams& params) const
{
    if (entries.empty())
        return 0;
    std::vector<Vector> cols;
    for (const auto& e : entries)
        cols.push_back(e.pub.xi);
    return comkex::rank(params.field, Matrix::from_columns(cols));
}

RecoveredKey recover_private_key(const PublicParams& params, const KeyDirectory& dir, const PublicKey& target,
                                 RecoveryMode mode, std::optional<std::size_t> degree)
{
    const Field& f = params.field;
    const std::size_t m = params.m();
    require_length(params, target, "target public key");

    std::vector<Vector> inputs;
    std::vector<Vector> outputs;
    for (const auto& e : dir.entries) {
        if (!e.priv)
            continue;
        require_length(params, e.pub, "directory public key");
        inputs.push_back(e.pub.xi);
        outputs.push_back(mat_apply(f, e.priv->t, target.xi));
    }

    RecoveredKey out;
    out.mode = mode;

    if (mode == RecoveryMode::FullMatrix) {
        std::vector<Vector> xi;
        std::vector<Vector> rho;
        for (std::size_t i = 0; i < inputs.size() && xi.size() < m; ++i) {
            xi.push_back(inputs[i]);
            if (comkex::rank(f, Matrix::from_columns(xi)) < xi.size()) {
                xi.pop_back();
                continue;
            }
            rho.push_back(outputs[i]);
        }
        if (xi.size() < m)
            fail(Errc::InsufficientRank, "only " + std::to_string(xi.size()) + " independent known keys, need " +
                                             std::to_string(m));
        out.t_hat = mat_mul(f, Matrix::from_columns(rho), invert(f, Matrix::from_columns(xi)));
        out.equations_used = m * m;
        out.rank = m;
        return out;
    }

    inputs.push_back(params.zeta);
    outputs.push_back(target.xi);
    const std::size_t deg = degree.value_or(params.degree);
    const auto basis = qz_basis(f, params.z.matrix, params.shape, deg);
    auto sol = solve_in_basis(f, basis, inputs, outputs);
    if (!sol.consistent())
        fail(Errc::InconsistentSystem, "no key in the structured span explains the directory");

    out.coeffs = to_polys(sol.solution(), params.shape.k);
    out.t_hat = eval_poly_in_z(f, out.coeffs, params.z.matrix, params.shape);
    out.rank = sol.rank;
    out.residual_rank_deficit = basis.size() - sol.rank;
    out.equations_used = inputs.size() * m;
    return out;
}

DirectoryRecovery recover_shared_from_directory(const PublicParams& params, const KeyDirectory& dir,
                                                const PublicKey& victim, const PublicKey& counterpart)
{
    const Field& f = params.field;
    require_length(params, victim, "victim public key");
    require_length(params, counterpart, "counterpart public key");

    std::vector<Vector> xi;
    std::vector<const PrivateKey*> keys;
    for (const auto& e : dir.entries) {
        if (!e.priv)
            continue;
        require_length(params, e.pub, "directory public key");
        xi.push_back(e.pub.xi);
        keys.push_back(&*e.priv);
    }
    if (xi.empty())
        fail(Errc::OutOfSpan, "directory has no known private keys");

    auto sol = solve_linear(f, Matrix::from_columns(xi), victim.xi);
    if (!sol.consistent())
        fail(Errc::OutOfSpan, "victim key is outside the span of the known public keys");

    DirectoryRecovery out;
    out.combination = sol.solution();
    out.rank = sol.rank;
    Vector kappa(params.m());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (out.combination[i].value == 0)
            continue;
        kappa = vec_add(f, kappa, vec_scale(f, out.combination[i], mat_apply(f, keys[i]->t, counterpart.xi)));
    }
    out.shared = SharedKey{std::move(kappa)};
    return out;
}

PassiveRecovery passive_commutant_attack(const PublicParams& params, const PublicKey& pub_a, const PublicKey& pub_b,
                                         std::optional<std::size_t> degree)
{
    const Field& f = params.field;
    const std::size_t m = params.m();
    require_length(params, pub_a, "first public key");
    require_length(params, pub_b, "second public key");

    const std::size_t cap = m * m;
    std::size_t deg = std::max<std::size_t>(degree.value_or(params.degree), 1);
    for (;;) {
        const auto basis = qz_basis(f, params.z.matrix, params.shape, deg);
        auto sol = solve_in_basis(f, basis, {params.zeta}, {pub_a.xi});
        if (sol.consistent()) {
            PassiveRecovery out;
            out.equivalent_key = private_key_from_coeffs(params, to_polys(sol.solution(), params.shape.k));
            out.shared = derive_shared(params, out.equivalent_key, pub_b);
            out.degree_used = deg;
            out.rank = sol.rank;
            out.unknowns = basis.size();
            return out;
        }
        if (deg >= cap)
            break;
        deg = std::min(deg * 2, cap);
    }
    fail(Errc::NoSolution, "no key of degree <= " + std::to_string(cap) + " maps zeta to the public key");
}

}  // namespace comkex
