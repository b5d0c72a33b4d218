// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iterator>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>

#include <unistd.h>

#include "../tools/cli.hpp"
#include "comkex/attacks.hpp"
#include "comkex/bench.hpp"
#include "comkex/errors.hpp"
#include "comkex/wire.hpp"
#include "oracles.hpp"
#include "worked_instance.hpp"

using namespace comkex;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& what)
{
    std::printf("criterion %d: %s  %s\n", n, ok ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

template <class Fn>
void criterion(int n, Fn&& fn)
{
    try {
        fn();
    } catch (const std::exception& e) {
        report(n, false, std::string("threw: ") + e.what());
    }
}

constexpr std::uint64_t kPrimes[] = {7, 101, 2147483647};
constexpr BlockShape kShapes[] = {{1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 2}, {3, 3}};

DirectoryEntry known(const KeyPair& kp)
{
    return DirectoryEntry{kp.pub, kp.priv};
}

NilPoly constant(const Field&, std::size_t k, Fp c)
{
    std::vector<Fp> v(k, Fp(0));
    v[0] = c;
    return NilPoly(std::move(v));
}

PrivateKey combine(const PublicParams& p, const std::vector<const PrivateKey*>& keys, const Vector& c)
{
    std::vector<NilPoly> coeffs(p.degree + 1, NilPoly::zero(p.shape.k));
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (std::size_t j = 0; j <= p.degree; ++j)
            coeffs[j] = nil_add(p.field, coeffs[j], nil_mul(p.field, constant(p.field, p.shape.k, c[i]), keys[i]->coeffs[j]));
    return private_key_from_coeffs(p, std::move(coeffs));
}

void key_agreement()
{
    const auto start = std::chrono::steady_clock::now();
    Rng rng(1001);
    std::size_t total = 0, agree = 0;
    for (auto q : kPrimes)
        for (std::size_t k : {1, 2, 3})
            for (std::size_t d : {2, 3})
                for (std::size_t degree : {1, 3}) {
                    const auto p = gen_params(q, k, d, degree, rng);
                    for (int i = 0; i < 28; ++i, ++total) {
                        const auto a = keygen(p, rng);
                        const auto b = keygen(p, rng);
                        agree += derive_shared(p, a.priv, b.pub) == derive_shared(p, b.priv, a.pub);
                    }
                }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(1, total >= 1000 && agree == total && secs < 10.0,
           std::to_string(agree) + "/" + std::to_string(total) + " instances agree in " + std::to_string(secs) + " s");
}

void algebraic_laws()
{
    Rng rng(1002);
    std::size_t ab = 0, ring = 0, qz = 0, n = 0;
    bool witness = false;
    for (; n < 1008; ++n) {
        const auto q = kPrimes[n % 3];
        const auto shape = kShapes[n % 6];
        const Field f(q);
        const auto o = [&](const Matrix& m) { return oracle::from(m); };
        const auto commutes = [&](const Matrix& x, const Matrix& y) {
            return oracle::mul(o(x), o(y), q) == oracle::mul(o(y), o(x), q);
        };

        const Matrix a = AElement{NilPoly::sample(f, shape.k, rng), shape.d}.realize();
        const Matrix b = BElement::sample(f, shape, rng).realize();
        ab += commutes(a, b);

        // An element of Q(A): a1 * a2 + a3, against z from Q(B).
        const Matrix a2 = AElement{NilPoly::sample(f, shape.k, rng), shape.d}.realize();
        const Matrix a3 = AElement{NilPoly::sample(f, shape.k, rng), shape.d}.realize();
        const Matrix qa = mat_add(f, mat_mul(f, a, a2), a3);
        const Matrix z = sample_z(f, shape, rng).matrix;
        ring += commutes(qa, z);

        std::vector<NilPoly> c1, c2;
        for (std::size_t i = 0; i < 3; ++i) {
            c1.push_back(NilPoly::sample(f, shape.k, rng));
            c2.push_back(NilPoly::sample(f, shape.k, rng));
        }
        qz += commutes(eval_poly_in_z(f, c1, z, shape), eval_poly_in_z(f, c2, z, shape));

        if (!witness) {
            const Matrix b2 = BElement::sample(f, shape, rng).realize();
            witness = !commutes(b, b2);
        }
    }
    report(2, ab == n && ring == n && qz == n && witness,
           "A-B " + std::to_string(ab) + "/" + std::to_string(n) + ", Q(A)-Q(B) " + std::to_string(ring) + "/" +
               std::to_string(n) + ", Q[z] " + std::to_string(qz) + "/" + std::to_string(n) +
               (witness ? ", non-commuting B pair found" : ", no non-commuting B pair"));
}

void worked_instance()
{
    const auto p = testing::worked_params();
    const auto a = testing::worked_key(p, 2, 3);
    const auto b = testing::worked_key(p, 1, 1);
    const oracle::Mat z{{1, 1}, {0, 1}};
    const oracle::Mat ta = oracle::add(oracle::scale(2, oracle::identity(2), 7), oracle::scale(3, z, 7), 7);
    const oracle::Mat tb = oracle::add(oracle::identity(2), z, 7);
    const oracle::Vec zeta{1, 2};
    const auto xa = oracle::apply(ta, zeta, 7);
    const auto xb = oracle::apply(tb, zeta, 7);
    const auto kappa = oracle::apply(ta, xb, 7);

    const auto eve = passive_commutant_attack(p, a.pub, b.pub);
    const bool ok = xa == oracle::Vec{4, 3} && xb == oracle::Vec{4, 4} && kappa == oracle::Vec{4, 6} &&
                    oracle::from(a.pub.xi) == xa && oracle::from(b.pub.xi) == xb &&
                    oracle::from(derive_shared(p, a.priv, b.pub).kappa) == kappa &&
                    oracle::from(derive_shared(p, b.priv, a.pub).kappa) == kappa &&
                    oracle::from(eve.equivalent_key.t) == ta && oracle::from(eve.shared.kappa) == kappa;
    report(3, ok, "xi_A=(4,3) xi_B=(4,4) kappa=(4,6), passive T' = 2I+3z");
}

void private_key_recovery()
{
    Rng rng(1004);
    std::size_t qualifying = 0, full_ok = 0, structured_ok = 0, skipped = 0;
    for (std::size_t round = 0; qualifying < 210 && round < 2000; ++round) {
        const auto q = kPrimes[1 + round % 2];
        const auto shape = kShapes[round % 6];
        const auto p = gen_params(q, shape.k, shape.d, shape.d - 1 + round % 2, rng);
        KeyDirectory dir;
        for (std::size_t i = 0; i < p.m(); ++i)
            dir.entries.push_back(known(keygen(p, rng)));
        std::vector<Vector> cols;
        for (const auto& e : dir.entries)
            cols.push_back(e.pub.xi);
        if (rank(p.field, Matrix::from_columns(cols)) < p.m()) {
            ++skipped;
            continue;
        }
        ++qualifying;
        const auto target = keygen(p, rng);
        full_ok += recover_private_key(p, dir, target.pub, RecoveryMode::FullMatrix).t_hat == target.priv.t;

        const auto rec = recover_private_key(p, dir, target.pub, RecoveryMode::Structured);
        bool agrees = mat_apply(p.field, rec.t_hat, p.zeta) == target.pub.xi;
        for (const auto& v : cols)
            agrees = agrees && mat_apply(p.field, rec.t_hat, v) == mat_apply(p.field, target.priv.t, v);
        structured_ok += agrees;
    }
    report(4, qualifying >= 200 && full_ok == qualifying && structured_ok == qualifying,
           "full " + std::to_string(full_ok) + "/" + std::to_string(qualifying) + ", structured " +
               std::to_string(structured_ok) + "/" + std::to_string(qualifying) + " (" + std::to_string(skipped) +
               " rank-deficient directories skipped)");
}

void directory_attack()
{
    Rng rng(1005);
    std::size_t in_span = 0, matched = 0, out_of_span = 0, raised = 0;
    for (std::size_t round = 0; round < 240; ++round) {
        const auto q = kPrimes[round % 3];
        const auto shape = kShapes[round % 6];
        const auto p = gen_params(q, shape.k, shape.d, 3, rng);
        KeyDirectory dir;
        std::vector<const PrivateKey*> privs;
        const std::size_t s = 1 + rng.below(p.m());
        for (std::size_t i = 0; i < s; ++i)
            dir.entries.push_back(known(keygen(p, rng)));
        for (const auto& e : dir.entries)
            privs.push_back(&*e.priv);

        Vector c(s);
        for (auto& x : c)
            x = p.field.sample(rng);
        const auto victim = combine(p, privs, c);
        const auto victim_pub = public_key_of(p, victim);
        const auto counterpart = keygen(p, rng);
        ++in_span;
        matched += recover_shared_from_directory(p, dir, victim_pub, counterpart.pub).shared ==
                   derive_shared(p, victim, counterpart.pub);

        // A fresh key outside a one-entry directory's span must be refused.
        const KeyDirectory one{{dir.entries[0]}};
        const auto outsider = keygen(p, rng);
        if (rank(p.field, Matrix::from_columns(std::vector<Vector>{one.entries[0].pub.xi, outsider.pub.xi})) == 2) {
            ++out_of_span;
            try {
                (void)recover_shared_from_directory(p, one, outsider.pub, counterpart.pub);
            } catch (const Error& e) {
                raised += e.code() == Errc::OutOfSpan;
            }
        }
    }
    report(5, in_span >= 200 && matched == in_span && out_of_span > 0 && raised == out_of_span,
           "in-span " + std::to_string(matched) + "/" + std::to_string(in_span) + ", OutOfSpan " +
               std::to_string(raised) + "/" + std::to_string(out_of_span));
}

void passive_attack()
{
    Rng rng(1006);
    std::size_t total = 0, ok = 0, big_q = 0;
    for (std::size_t round = 0; round < 72; ++round) {
        const auto q = kPrimes[round % 3];
        const auto shape = kShapes[(round / 3) % 6];
        const auto p = gen_params(q, shape.k, shape.d, round % 4 == 0 ? 1 : 3, rng);
        for (int i = 0; i < 14; ++i, ++total) {
            const auto a = keygen(p, rng);
            const auto b = keygen(p, rng);
            const bool hit = passive_commutant_attack(p, a.pub, b.pub, p.degree).shared == derive_shared(p, a.priv, b.pub);
            ok += hit;
            big_q += hit && q == 2147483647;
        }
    }
    report(6, total >= 1000 && ok == total && big_q > 0,
           std::to_string(ok) + "/" + std::to_string(total) + " sessions recovered (" + std::to_string(big_q) +
               " at q=2147483647)");
}

void operation_counts()
{
    BenchConfig config;
    config.repetitions = 50;
    const auto r = run_bench(config);
    const auto& ck = r.entry("commutant-kex");
    const auto& dh = r.entry("diffie-hellman");
    const std::uint64_t m = config.k * config.d;
    report(7, m == 16 && ck.muls == m * m && ck.public_key_bits == dh.m_or_p_bits && ck.muls < dh.muls,
           "m=16 derive " + std::to_string(ck.muls) + " muls vs DH " + std::to_string(dh.muls) + " muls (" +
               std::to_string(ck.public_key_bits) + "-bit public key, " + std::to_string(dh.m_or_p_bits) +
               "-bit exponent)");
}

void wire_demo()
{
    Rng rng(1008);
    const auto p = gen_params(2147483647, 2, 3, 3, rng);
    constexpr std::size_t kSessions = 100;

    wire::TcpListener listener("127.0.0.1", 0);
    std::mutex mu;
    std::vector<std::optional<wire::SessionResult>> served(kSessions);
    std::size_t server_errors = 0;
    std::thread server([&] {
        wire::serve(
            listener, kSessions,
            [](const PublicParams& params) {
                Rng r = Rng::from_entropy();
                return keygen(params, r);
            },
            [&](std::size_t i, const wire::SessionResult* res, std::exception_ptr) {
                std::lock_guard lock(mu);
                if (res)
                    served[i] = *res;
                else
                    ++server_errors;
            });
    });

    std::vector<wire::SessionResult> clients;
    std::size_t client_errors = 0;
    for (std::size_t i = 0; i < kSessions; ++i) {
        try {
            auto conn = wire::connect_tcp("127.0.0.1", listener.port());
            clients.push_back(wire::run_initiator(p, keygen(p, rng), *conn));
        } catch (const std::exception&) {
            ++client_errors;
        }
    }
    server.join();

    std::size_t agreed = 0, recovered = 0;
    for (std::size_t i = 0; i < clients.size(); ++i) {
        // Sessions are accepted in connection order.
        if (served[i] && served[i]->shared == clients[i].shared && served[i]->checksum == clients[i].checksum)
            ++agreed;
        const auto eve = wire::eavesdrop(clients[i].transcript);
        recovered += eve.verified && eve.shared == clients[i].shared;
    }

    std::size_t frames_ok = 0;
    for (int i = 0; i < 10000; ++i) {
        wire::Frame f{static_cast<wire::Tag>(1 + rng.below(3)), std::vector<std::uint8_t>(rng.below(512))};
        for (auto& b : f.payload)
            b = static_cast<std::uint8_t>(rng.next_u64());
        const auto bytes = wire::encode_frame(f);
        const auto d = wire::decode_frame(bytes);
        frames_ok += d.frame && *d.frame == f && d.consumed == bytes.size();
    }
    report(8, agreed == kSessions && recovered == kSessions && frames_ok == 10000 && client_errors == 0 &&
                  server_errors == 0,
           std::to_string(agreed) + "/100 sessions agree, " + std::to_string(recovered) +
               "/100 eavesdropped, " + std::to_string(frames_ok) + "/10000 frames round-trip");
}

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

// Library pipeline serialized to bytes, then the same through the CLI.
std::string library_pipeline(std::uint64_t seed)
{
    Rng rng(seed);
    const auto p = gen_params(2147483647, 2, 3, 3, rng);
    const auto a = keygen(p, rng);
    const auto b = keygen(p, rng);
    KeyDirectory dir{{known(a)}};
    std::string out = codec::dump(codec::to_json(p)) + codec::dump(codec::to_json(a.priv)) +
                      codec::dump(codec::to_json(b.pub));
    const auto s = derive_shared(p, a.priv, b.pub).to_bytes();
    out.append(s.begin(), s.end());
    const auto eve = passive_commutant_attack(p, a.pub, b.pub).shared.to_bytes();
    out.append(eve.begin(), eve.end());
    out += codec::dump(codec::to_json(recover_private_key(p, dir, b.pub, RecoveryMode::Structured).t_hat));
    return out;
}

std::string cli_pipeline(const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    const auto at = [&](const char* n) { return (dir / n).string(); };
    std::ostringstream sink;
    const std::vector<std::vector<std::string>> steps{
        {"gen-params", "--q", "2147483647", "--k", "2", "--d", "2", "--degree", "3", "--seed", "2024", "-o",
         at("params.json")},
        {"keygen", "--params", at("params.json"), "-o", at("a.key"), "--pub", at("a.pub"), "--seed", "1"},
        {"keygen", "--params", at("params.json"), "-o", at("b.key"), "--pub", at("b.pub"), "--seed", "2"},
        {"derive", "--params", at("params.json"), "--key", at("a.key"), "--peer-pub", at("b.pub"), "-o", at("s.bin")},
        {"attack", "passive", "--params", at("params.json"), "--pub-a", at("a.pub"), "--pub-b", at("b.pub"), "-o",
         at("passive.json")},
        {"bench", "--q", "101", "--k", "2", "--d", "2", "--degree", "1", "--reps", "1", "-o", at("bench.json")},
    };
    for (auto args : steps) {
        args.insert(args.begin(), "comkex");
        if (cli::run(args, sink, sink) != 0)
            throw std::runtime_error("cli step failed: " + args[1]);
    }
    std::string out;
    for (const char* f : {"params.json", "a.key", "a.pub", "b.key", "b.pub", "s.bin", "passive.json"})
        out += slurp(dir / f);
    // Wall time differs run to run; compare the counts only.
    auto bench = codec::Json::parse(slurp(dir / "bench.json"));
    for (auto& e : bench["entries"])
        e.erase("wall_ns");
    return out + bench.dump();
}

void determinism()
{
    const bool lib = library_pipeline(9) == library_pipeline(9) && library_pipeline(9) != library_pipeline(10);
    const auto root = std::filesystem::temp_directory_path() / ("comkex-accept-" + std::to_string(::getpid()));
    const bool cli = cli_pipeline(root / "run1") == cli_pipeline(root / "run2");
    std::filesystem::remove_all(root);
    report(9, lib && cli, std::string("library pipeline ") + (lib ? "identical" : "differs") + ", CLI pipeline " +
                              (cli ? "identical" : "differs"));
}

}  // namespace

int main()
{
    criterion(1, key_agreement);
    criterion(2, algebraic_laws);
    criterion(3, worked_instance);
    criterion(4, private_key_recovery);
    criterion(5, directory_attack);
    criterion(6, passive_attack);
    criterion(7, operation_counts);
    criterion(8, wire_demo);
    criterion(9, determinism);
    return failures == 0 ? 0 : 1;
}
