#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <mutex>
#include <optional>

#include "CLI11.hpp"

#include "comkex/attacks.hpp"
#include "comkex/bench.hpp"
#include "comkex/codec.hpp"
#include "comkex/errors.hpp"
#include "comkex/kex.hpp"
#include "comkex/wire.hpp"

namespace comkex::cli {

namespace {

using codec::Json;

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(Errc::ParseError, "cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::string_view data)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !out.write(data.data(), static_cast<std::streamsize>(data.size())))
        fail(Errc::ParseError, "cannot write " + path);
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes)
{
    write_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

Json load_json(const std::string& path)
{
    try {
        return codec::parse_document(read_file(path));
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what(), e.offset());
    }
}

// Re-throws codec failures with the file name attached.
template <typename Fn>
auto with_file(const std::string& path, Fn&& fn)
{
    const Json j = load_json(path);
    try {
        return fn(j);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what(), e.offset());
    }
}

PublicParams load_params(const std::string& path)
{
    return with_file(path, [](const Json& j) { return codec::parse_params(j); });
}

PrivateKey load_key(const std::string& path, const PublicParams& params)
{
    return with_file(path, [&](const Json& j) { return codec::parse_private_key(j, params); });
}

PublicKey load_pub(const std::string& path, const PublicParams& params)
{
    return with_file(path, [&](const Json& j) { return codec::parse_public_key(j, params); });
}

// {"entries": [{"pub": {"xi": ...}, "key": {...}?}]}
KeyDirectory load_directory(const std::string& path, const PublicParams& params)
{
    return with_file(path, [&](const Json& j) {
        if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
            fail(Errc::ParseError, "directory needs an \"entries\" array");
        KeyDirectory dir;
        for (std::size_t i = 0; i < j["entries"].size(); ++i) {
            const auto& e = j["entries"][i];
            const std::string at = "/entries/" + std::to_string(i);
            if (!e.is_object() || !e.contains("pub"))
                fail(Errc::ParseError, at + ": missing \"pub\"");
            DirectoryEntry entry{codec::parse_public_key(e["pub"], params), std::nullopt};
            if (e.contains("key")) {
                entry.priv = codec::parse_private_key(e["key"], params);
                if (public_key_of(params, *entry.priv) != entry.pub)
                    fail(Errc::ParseError, at + ": key does not produce the listed public key");
            }
            dir.entries.push_back(std::move(entry));
        }
        return dir;
    });
}

Rng make_rng(const std::optional<std::uint64_t>& seed)
{
    return seed ? Rng(*seed) : Rng::from_entropy();
}

void emit(std::ostream& out, const std::string& path, const Json& j)
{
    if (path.empty())
        out << codec::dump(j);
    else
        write_file(path, codec::dump(j));
}

int exit_code_for(Errc code)
{
    switch (code) {
    case Errc::InsufficientRank:
    case Errc::InconsistentSystem:
    case Errc::OutOfSpan:
    case Errc::NoSolution:
    case Errc::Singular:
    case Errc::IncompleteTranscript:
        return kAttackFailed;
    case Errc::Transport:
    case Errc::FrameTooLarge:
    case Errc::UnknownTag:
    case Errc::ChecksumMismatch:
    case Errc::ProtocolViolation:
        return kTransport;
    default:
        return kInvalidInput;
    }
}

struct Options {
    std::optional<std::uint64_t> seed;
    std::uint64_t q = 0;
    std::size_t k = 0;
    std::size_t d = 0;
    std::size_t degree = kDefaultDegree;
    std::string out;
    std::string params, key, pub, peer_pub, dir, target_pub, victim_pub, counterpart_pub, pub_a, pub_b;
    std::string mode = "full";
    std::string shared_out;
    std::optional<std::size_t> attack_degree;
    std::uint64_t dh_p = 2147483647;
    std::uint64_t dh_g = 7;
    std::optional<std::size_t> dh_bits;
    std::size_t reps = 200;
    std::string addr;
    std::size_t sessions = 1;
    std::string transcript;
    std::string transcript_dir;
    std::vector<std::string> entries;
};

int cmd_gen_params(const Options& o, std::ostream&)
{
    Rng rng = make_rng(o.seed);
    PublicParams params = gen_params(o.q, o.k, o.d, o.degree, rng);
    params.seed = o.seed;
    write_file(o.out, codec::dump(codec::to_json(params)));
    return kOk;
}

int cmd_keygen(const Options& o, std::ostream&)
{
    const PublicParams params = load_params(o.params);
    Rng rng = make_rng(o.seed);
    const KeyPair kp = keygen(params, rng);
    write_file(o.out, codec::dump(codec::to_json(kp.priv)));
    write_file(o.pub, codec::dump(codec::to_json(kp.pub)));
    return kOk;
}

int cmd_derive(const Options& o, std::ostream&)
{
    const PublicParams params = load_params(o.params);
    const PrivateKey key = load_key(o.key, params);
    const PublicKey peer = load_pub(o.peer_pub, params);
    write_bytes(o.out, derive_shared(params, key, peer).to_bytes());
    return kOk;
}

// Builds a directory file from pub.json[:key.json] arguments.
int cmd_make_dir(const Options& o, std::ostream&)
{
    const PublicParams params = load_params(o.params);
    Json entries = Json::array();
    for (const auto& item : o.entries) {
        const auto colon = item.find(':');
        const std::string pub_path = item.substr(0, colon);
        Json entry{{"pub", codec::to_json(load_pub(pub_path, params))}};
        if (colon != std::string::npos)
            entry["key"] = codec::to_json(load_key(item.substr(colon + 1), params));
        entries.push_back(std::move(entry));
    }
    write_file(o.out, codec::dump(Json{{"entries", std::move(entries)}}));
    return kOk;
}

int cmd_attack_recover(const Options& o, std::ostream& out)
{
    const PublicParams params = load_params(o.params);
    const KeyDirectory dir = load_directory(o.dir, params);
    const PublicKey target = load_pub(o.target_pub, params);
    if (o.mode != "full" && o.mode != "structured")
        throw CLI::ValidationError("--mode", "expected full or structured");
    const auto mode = o.mode == "full" ? RecoveryMode::FullMatrix : RecoveryMode::Structured;

    const RecoveredKey rec = recover_private_key(params, dir, target, mode, o.attack_degree);
    bool verified = mat_apply(params.field, rec.t_hat, params.zeta) == target.xi;
    for (const auto& e : dir.entries)
        if (e.priv)
            verified = verified && mat_apply(params.field, rec.t_hat, e.pub.xi) ==
                                       mat_apply(params.field, e.priv->t, target.xi);

    Json report{{"mode", o.mode},
                {"equations_used", rec.equations_used},
                {"rank", rec.rank},
                {"residual_rank_deficit", rec.residual_rank_deficit},
                {"recovered_key", codec::to_json(rec.t_hat)},
                {"verified", verified}};
    emit(out, o.out, report);
    return kOk;
}

int cmd_attack_shared(const Options& o, std::ostream& out)
{
    const PublicParams params = load_params(o.params);
    const KeyDirectory dir = load_directory(o.dir, params);
    const PublicKey victim = load_pub(o.victim_pub, params);
    const PublicKey counterpart = load_pub(o.counterpart_pub, params);

    const DirectoryRecovery rec = recover_shared_from_directory(params, dir, victim, counterpart);
    std::vector<Vector> cols;
    for (const auto& e : dir.entries)
        if (e.priv)
            cols.push_back(e.pub.xi);
    const bool verified = mat_apply(params.field, Matrix::from_columns(cols), rec.combination) == victim.xi;

    Json report{{"mode", "directory"},
                {"equations_used", params.m()},
                {"rank", rec.rank},
                {"shared_key", codec::to_json(rec.shared.kappa)},
                {"verified", verified}};
    if (!o.shared_out.empty())
        write_bytes(o.shared_out, rec.shared.to_bytes());
    emit(out, o.out, report);
    return kOk;
}

int cmd_attack_passive(const Options& o, std::ostream& out)
{
    const PublicParams params = load_params(o.params);
    const PublicKey a = load_pub(o.pub_a, params);
    const PublicKey b = load_pub(o.pub_b, params);

    const PassiveRecovery rec = passive_commutant_attack(params, a, b, o.attack_degree);
    const bool verified = public_key_of(params, rec.equivalent_key) == a;
    Json report{{"mode", "passive"},
                {"equations_used", params.m()},
                {"rank", rec.rank},
                {"degree_used", rec.degree_used},
                {"recovered_key", codec::to_json(rec.equivalent_key)},
                {"shared_key", codec::to_json(rec.shared.kappa)},
                {"verified", verified}};
    if (!o.shared_out.empty())
        write_bytes(o.shared_out, rec.shared.to_bytes());
    emit(out, o.out, report);
    return kOk;
}

int cmd_bench(const Options& o, std::ostream& out)
{
    BenchConfig cfg;
    cfg.q = o.q;
    cfg.k = o.k;
    cfg.d = o.d;
    cfg.degree = o.degree;
    cfg.dh = dh::DhParams{o.dh_p, o.dh_g};
    cfg.dh_exponent_bits = o.dh_bits;
    cfg.seed = o.seed.value_or(1);
    cfg.repetitions = o.reps;
    emit(out, o.out, run_bench(cfg).to_json());
    return kOk;
}

int cmd_demo_listen(const Options& o, std::ostream& out)
{
    const auto [host, port] = wire::split_address(o.addr);
    wire::TcpListener listener(host, port);
    out << "listening on " << host << ":" << listener.port() << std::endl;

    const std::uint64_t base = o.seed ? *o.seed : Rng::from_entropy().next_u64();
    std::mutex mu;
    std::size_t counter = 0;
    const wire::KeySource keys = [&](const PublicParams& params) {
        std::uint64_t session;
        {
            std::lock_guard lock(mu);
            session = counter++;
        }
        Rng rng(base + session);
        return keygen(params, rng);
    };

    int status = kOk;
    wire::serve(listener, o.sessions, keys,
                [&](std::size_t i, const wire::SessionResult* result, std::exception_ptr error) {
                    std::lock_guard lock(mu);
                    if (result) {
                        if (!o.transcript_dir.empty())
                            write_file((std::filesystem::path(o.transcript_dir) /
                                        ("session-" + std::to_string(i) + ".json"))
                                           .string(),
                                       codec::dump(result->transcript.to_json()));
                        out << Json{{"session", i},
                                    {"shared_key", wire::to_hex(result->shared.to_bytes())},
                                    {"checksum", wire::to_hex(encode_be(std::vector{Fp(result->checksum)}))}}
                                   .dump()
                            << std::endl;
                        return;
                    }
                    try {
                        std::rethrow_exception(error);
                    } catch (const Error& e) {
                        status = std::max(status, exit_code_for(e.code()));
                        out << Json{{"session", i}, {"error", e.what()}}.dump() << std::endl;
                    } catch (const std::exception& e) {
                        status = kTransport;
                        out << Json{{"session", i}, {"error", e.what()}}.dump() << std::endl;
                    }
                });
    return status;
}

int cmd_demo_connect(const Options& o, std::ostream& out)
{
    const PublicParams params = load_params(o.params);
    std::optional<KeyPair> keys;
    if (!o.key.empty()) {
        PrivateKey priv = load_key(o.key, params);
        PublicKey pub = public_key_of(params, priv);
        keys = KeyPair{std::move(priv), std::move(pub)};
    } else {
        Rng rng = make_rng(o.seed);
        keys = keygen(params, rng);
    }
    const auto [host, port] = wire::split_address(o.addr);
    auto conn = wire::connect_tcp(host, port);
    const wire::SessionResult result = wire::run_initiator(params, *keys, *conn);
    if (!o.transcript.empty())
        write_file(o.transcript, codec::dump(result.transcript.to_json()));
    if (!o.out.empty())
        write_bytes(o.out, result.shared.to_bytes());
    out << Json{{"shared_key", wire::to_hex(result.shared.to_bytes())}, {"confirmed", true}}.dump() << std::endl;
    return kOk;
}

int cmd_demo_sniff(const Options& o, std::ostream& out)
{
    const wire::Transcript t = with_file(o.transcript, [](const Json& j) { return wire::Transcript::from_json(j); });
    const wire::EavesdropResult res = wire::eavesdrop(t);
    if (!o.out.empty())
        write_bytes(o.out, res.shared.to_bytes());
    out << Json{{"shared_key", wire::to_hex(res.shared.to_bytes())},
                {"confirms_seen", res.confirms_seen},
                {"verified", res.verified}}
               .dump()
        << std::endl;
    return res.verified ? kOk : kAttackFailed;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Commutant-matrix key exchange: keys, exchange, attacks, benchmark and wire demo", "comkex"};
    app.require_subcommand(1);

    int (*handler)(const Options&, std::ostream&) = nullptr;
    auto bind = [&](CLI::App* sub, int (*fn)(const Options&, std::ostream&)) {
        sub->callback([&handler, fn] { handler = fn; });
    };

    auto* gp = app.add_subcommand("gen-params", "Generate public parameters");
    gp->add_option("--q", o.q, "Prime field modulus")->required();
    gp->add_option("--k", o.k, "Block size")->required();
    gp->add_option("--d", o.d, "Block count")->required();
    gp->add_option("--degree", o.degree, "Polynomial degree bound")->required();
    gp->add_option("--seed", o.seed, "Deterministic seed");
    gp->add_option("-o,--out", o.out, "params.json")->required();
    bind(gp, cmd_gen_params);

    auto* kg = app.add_subcommand("keygen", "Generate a key pair");
    kg->add_option("--params", o.params)->required();
    kg->add_option("-o,--out", o.out, "key.json")->required();
    kg->add_option("--pub", o.pub, "pub.json")->required();
    kg->add_option("--seed", o.seed);
    bind(kg, cmd_keygen);

    auto* dv = app.add_subcommand("derive", "Derive the shared key");
    dv->add_option("--params", o.params)->required();
    dv->add_option("--key", o.key)->required();
    dv->add_option("--peer-pub", o.peer_pub)->required();
    dv->add_option("-o,--out", o.out, "shared.bin")->required();
    bind(dv, cmd_derive);

    auto* md = app.add_subcommand("make-dir", "Assemble a key directory from pub.json[:key.json] files");
    md->add_option("--params", o.params)->required();
    md->add_option("--entry", o.entries)->required();
    md->add_option("-o,--out", o.out, "dir.json")->required();
    bind(md, cmd_make_dir);

    auto* at = app.add_subcommand("attack", "Run an attack");
    at->require_subcommand(1);
    auto* rk = at->add_subcommand("recover-key", "Recover a private key from known key pairs");
    rk->add_option("--params", o.params)->required();
    rk->add_option("--dir", o.dir)->required();
    rk->add_option("--target-pub", o.target_pub)->required();
    rk->add_option("--mode", o.mode)->check(CLI::IsMember({"full", "structured"}));
    rk->add_option("--degree", o.attack_degree, "Degree bound for structured mode");
    rk->add_option("-o,--out", o.out);
    bind(rk, cmd_attack_recover);

    auto* sh = at->add_subcommand("shared", "Recover a shared key from a key directory");
    sh->add_option("--params", o.params)->required();
    sh->add_option("--dir", o.dir)->required();
    sh->add_option("--victim-pub", o.victim_pub)->required();
    sh->add_option("--counterpart-pub", o.counterpart_pub)->required();
    sh->add_option("--shared-out", o.shared_out);
    sh->add_option("-o,--out", o.out);
    bind(sh, cmd_attack_shared);

    auto* pa = at->add_subcommand("passive", "Recover a shared key from public data only");
    pa->add_option("--params", o.params)->required();
    pa->add_option("--pub-a", o.pub_a)->required();
    pa->add_option("--pub-b", o.pub_b)->required();
    pa->add_option("--degree", o.attack_degree, "Attacker's degree bound (defaults to D)");
    pa->add_option("--shared-out", o.shared_out);
    pa->add_option("-o,--out", o.out);
    bind(pa, cmd_attack_passive);

    auto* bn = app.add_subcommand("bench", "Count derivation multiplications against Diffie-Hellman");
    bn->add_option("--q", o.q)->required();
    bn->add_option("--k", o.k)->required();
    bn->add_option("--d", o.d)->required();
    bn->add_option("--degree", o.degree)->required();
    bn->add_option("--dh-p", o.dh_p);
    bn->add_option("--dh-g", o.dh_g);
    bn->add_option("--dh-bits", o.dh_bits, "DH exponent bits (default: commutant public key bits)");
    bn->add_option("--reps", o.reps);
    bn->add_option("--seed", o.seed);
    bn->add_option("-o,--out", o.out);
    bind(bn, cmd_bench);

    auto* demo = app.add_subcommand("demo", "Live exchange over TCP");
    demo->require_subcommand(1);
    auto* ls = demo->add_subcommand("listen", "Answer exchanges as the responder");
    ls->add_option("--addr", o.addr, "host:port")->required();
    ls->add_option("--sessions", o.sessions)->check(CLI::PositiveNumber);
    ls->add_option("--seed", o.seed);
    ls->add_option("--transcript-dir", o.transcript_dir);
    bind(ls, cmd_demo_listen);

    auto* cn = demo->add_subcommand("connect", "Start an exchange as the initiator");
    cn->add_option("--addr", o.addr, "host:port")->required();
    cn->add_option("--params", o.params)->required();
    cn->add_option("--key", o.key);
    cn->add_option("--seed", o.seed);
    cn->add_option("--transcript", o.transcript);
    cn->add_option("-o,--out", o.out);
    bind(cn, cmd_demo_connect);

    auto* sn = demo->add_subcommand("sniff", "Recover a session key from a transcript");
    sn->add_option("--transcript", o.transcript)->required();
    sn->add_option("-o,--out", o.out);
    bind(sn, cmd_demo_sniff);

    try {
        std::vector<std::string> args(argv.rbegin(), argv.rend() - 1);
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        return handler(o, out);
    } catch (const Error& e) {
        err << "comkex: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const CLI::ValidationError& e) {
        err << "comkex: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "comkex: " << e.what() << "\n";
        return kInvalidInput;
    }
}

}  // namespace comkex::cli
