#include "comkex/wire.hpp"

#include <exception>
#include <string>
#include <thread>
#include <utility>

#include "comkex/errors.hpp"

namespace comkex::wire {

namespace {

bool known_tag(std::uint8_t t) noexcept
{
    return t >= 0x01 && t <= 0x03;
}

std::vector<std::uint8_t> be64(std::uint64_t v)
{
    std::vector<std::uint8_t> out(8);
    for (int i = 7; i >= 0; --i, v >>= 8)
        out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
    return out;
}

std::uint64_t read_be64(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() != 8)
        fail(Errc::ProtocolViolation, "CONFIRM payload must be 8 bytes");
    std::uint64_t v = 0;
    for (auto b : bytes)
        v = (v << 8) | b;
    return v;
}

std::vector<std::uint8_t> as_bytes(const std::string& s)
{
    return {s.begin(), s.end()};
}

PublicKey decode_pubkey(const Frame& frame, const PublicParams& params)
{
    Vector xi;
    try {
        xi = decode_be(frame.payload, params.field);
    } catch (const Error& e) {
        fail(Errc::ProtocolViolation, std::string("bad PUBKEY payload: ") + e.what());
    }
    if (xi.size() != params.m())
        fail(Errc::ProtocolViolation, "PUBKEY carries " + std::to_string(xi.size()) + " entries, expected " +
                                          std::to_string(params.m()));
    return PublicKey{std::move(xi)};
}

PublicParams decode_params(const Frame& frame)
{
    const std::string text(frame.payload.begin(), frame.payload.end());
    return codec::parse_params(codec::parse_document(text));
}

Frame expect(FrameReader& reader, Tag tag)
{
    Frame f = reader.next();
    if (f.tag != tag)
        fail(Errc::ProtocolViolation, "expected " + std::string(tag_name(tag)) + ", received " +
                                          std::string(tag_name(f.tag)));
    return f;
}

class Session {
public:
    Session(Transport& transport, Direction outgoing) : transport_(transport), reader_(transport), out_(outgoing) {}

    void send(Frame frame)
    {
        transport_.send(encode_frame(frame));
        transcript_.append(out_, std::move(frame));
    }

    Frame receive(Tag tag)
    {
        Frame f = expect(reader_, tag);
        transcript_.append(incoming(), f);
        return f;
    }

    SessionResult confirm(SharedKey shared)
    {
        const std::uint64_t mine = checksum64(shared.to_bytes());
        send(Frame{Tag::Confirm, be64(mine)});
        const std::uint64_t theirs = read_be64(receive(Tag::Confirm).payload);
        transport_.close();
        if (mine != theirs)
            fail(Errc::ChecksumMismatch, "peer confirmed a different key");
        return SessionResult{std::move(shared), mine, std::move(transcript_)};
    }

private:
    Direction incoming() const noexcept
    {
        return out_ == Direction::InitiatorToResponder ? Direction::ResponderToInitiator
                                                       : Direction::InitiatorToResponder;
    }

    Transport& transport_;
    FrameReader reader_;
    Direction out_;
    Transcript transcript_;
};

}  // namespace

std::vector<std::uint8_t> encode_frame(const Frame& frame)
{
    const std::size_t n = frame.payload.size();
    if (n > kMaxPayload)
        fail(Errc::FrameTooLarge, "payload of " + std::to_string(n) + " bytes exceeds 2^20");
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + n);
    for (int shift = 24; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(n >> shift));
    out.push_back(static_cast<std::uint8_t>(frame.tag));
    out.insert(out.end(), frame.payload.begin(), frame.payload.end());
    return out;
}

DecodeResult decode_frame(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < 4)
        return {};
    const std::size_t n = (std::size_t{bytes[0]} << 24) | (std::size_t{bytes[1]} << 16) |
                          (std::size_t{bytes[2]} << 8) | std::size_t{bytes[3]};
    if (n > kMaxPayload)
        fail(Errc::FrameTooLarge, "declared payload of " + std::to_string(n) + " bytes exceeds 2^20");
    if (bytes.size() < kHeaderSize)
        return {};
    if (!known_tag(bytes[4]))
        fail(Errc::UnknownTag, "tag byte " + std::to_string(bytes[4]));
    if (bytes.size() < kHeaderSize + n)
        return {};
    Frame f{static_cast<Tag>(bytes[4]), {bytes.begin() + kHeaderSize, bytes.begin() + kHeaderSize + n}};
    return DecodeResult{std::move(f), kHeaderSize + n};
}

std::string_view tag_name(Tag tag) noexcept
{
    switch (tag) {
    case Tag::Params: return "PARAMS";
    case Tag::PubKey: return "PUBKEY";
    case Tag::Confirm: return "CONFIRM";
    }
    return "UNKNOWN";
}

std::uint64_t checksum64(std::span<const std::uint8_t> bytes) noexcept
{
    std::uint64_t state = 0xcbf29ce484222325ULL;
    for (auto b : bytes)
        state = (state ^ b) * 0x100000001b3ULL;
    return state;
}

Frame FrameReader::next()
{
    for (;;) {
        auto res = decode_frame(buffer_);
        if (!res.need_more_bytes()) {
            buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(res.consumed));
            return std::move(*res.frame);
        }
        std::uint8_t chunk[4096];
        const std::size_t n = transport_.receive(chunk);
        if (n == 0)
            fail(Errc::Transport, "stream closed mid-session");
        buffer_.insert(buffer_.end(), chunk, chunk + n);
    }
}

codec::Json Transcript::to_json() const
{
    codec::Json frames = codec::Json::array();
    for (const auto& e : entries_) {
        frames.push_back(codec::Json{{"dir", e.dir == Direction::InitiatorToResponder ? "i2r" : "r2i"},
                                     {"tag", std::string(tag_name(e.frame.tag))},
                                     {"payload_hex", to_hex(e.frame.payload)}});
    }
    return codec::Json{{"frames", std::move(frames)}};
}

Transcript Transcript::from_json(const codec::Json& j)
{
    if (!j.is_object() || !j.contains("frames") || !j["frames"].is_array())
        fail(Errc::ParseError, "transcript needs a \"frames\" array");
    Transcript t;
    for (std::size_t i = 0; i < j["frames"].size(); ++i) {
        const auto& f = j["frames"][i];
        const std::string path = "/frames/" + std::to_string(i);
        if (!f.is_object() || !f.contains("dir") || !f.contains("tag") || !f.contains("payload_hex") ||
            !f["dir"].is_string() || !f["tag"].is_string() || !f["payload_hex"].is_string())
            fail(Errc::ParseError, path + ": needs string dir, tag and payload_hex");
        Direction dir;
        if (f["dir"] == "i2r")
            dir = Direction::InitiatorToResponder;
        else if (f["dir"] == "r2i")
            dir = Direction::ResponderToInitiator;
        else
            fail(Errc::ParseError, path + "/dir: expected \"i2r\" or \"r2i\"");
        Tag tag;
        if (f["tag"] == "PARAMS")
            tag = Tag::Params;
        else if (f["tag"] == "PUBKEY")
            tag = Tag::PubKey;
        else if (f["tag"] == "CONFIRM")
            tag = Tag::Confirm;
        else
            fail(Errc::ParseError, path + "/tag: unknown tag");
        t.append(dir, Frame{tag, from_hex(f["payload_hex"].get<std::string>())});
    }
    return t;
}

SessionResult run_initiator(const PublicParams& params, const KeyPair& keys, Transport& transport)
{
    Session s(transport, Direction::InitiatorToResponder);
    s.send(Frame{Tag::Params, as_bytes(codec::dump(codec::to_json(params)))});
    s.send(Frame{Tag::PubKey, encode_be(keys.pub.xi)});
    const PublicKey peer = decode_pubkey(s.receive(Tag::PubKey), params);
    return s.confirm(derive_shared(params, keys.priv, peer));
}

SessionResult run_responder(Transport& transport, const KeySource& key_source)
{
    Session s(transport, Direction::ResponderToInitiator);
    const PublicParams params = decode_params(s.receive(Tag::Params));
    const PublicKey peer = decode_pubkey(s.receive(Tag::PubKey), params);
    const KeyPair keys = key_source(params);
    s.send(Frame{Tag::PubKey, encode_be(keys.pub.xi)});
    return s.confirm(derive_shared(params, keys.priv, peer));
}

EavesdropResult eavesdrop(const Transcript& transcript)
{
    const Frame* params_frame = nullptr;
    const Frame* pub_a = nullptr;
    const Frame* pub_b = nullptr;
    std::vector<const Frame*> confirms;
    for (const auto& e : transcript.entries()) {
        const bool from_initiator = e.dir == Direction::InitiatorToResponder;
        switch (e.frame.tag) {
        case Tag::Params:
            if (from_initiator && !params_frame)
                params_frame = &e.frame;
            break;
        case Tag::PubKey:
            if (from_initiator && !pub_a)
                pub_a = &e.frame;
            else if (!from_initiator && !pub_b)
                pub_b = &e.frame;
            break;
        case Tag::Confirm:
            confirms.push_back(&e.frame);
            break;
        }
    }
    if (!params_frame || !pub_a || !pub_b)
        fail(Errc::IncompleteTranscript, "need PARAMS and a PUBKEY from each side");

    const PublicParams params = decode_params(*params_frame);
    EavesdropResult out;
    out.detail = passive_commutant_attack(params, decode_pubkey(*pub_a, params), decode_pubkey(*pub_b, params));
    out.shared = out.detail.shared;
    out.confirms_seen = confirms.size();

    const std::uint64_t sum = checksum64(out.shared.to_bytes());
    out.verified = !confirms.empty();
    for (const Frame* c : confirms)
        if (c->payload.size() != 8 || read_be64(c->payload) != sum)
            out.verified = false;
    return out;
}

void serve(TcpListener& listener, std::size_t sessions, const KeySource& keys,
           const std::function<void(std::size_t, const SessionResult*, std::exception_ptr)>& on_done)
{
    std::vector<std::thread> workers;
    std::exception_ptr accept_error;
    for (std::size_t i = 0; i < sessions; ++i) {
        std::unique_ptr<SocketTransport> conn;
        try {
            conn = listener.accept();
        } catch (...) {
            accept_error = std::current_exception();
            break;
        }
        workers.emplace_back([i, &keys, &on_done, conn = std::move(conn)]() mutable {
            try {
                const SessionResult result = run_responder(*conn, keys);
                on_done(i, &result, nullptr);
            } catch (...) {
                on_done(i, nullptr, std::current_exception());
            }
        });
    }
    for (auto& w : workers)
        w.join();
    if (accept_error)
        std::rethrow_exception(accept_error);
}

std::string to_hex(std::span<const std::uint8_t> bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex)
{
    auto nibble = [&](char c, std::size_t pos) -> std::uint8_t {
        if (c >= '0' && c <= '9')
            return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f')
            return static_cast<std::uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F')
            return static_cast<std::uint8_t>(c - 'A' + 10);
        throw Error(Errc::ParseError, "non-hex digit", pos);
    };
    if (hex.size() % 2 != 0)
        fail(Errc::ParseError, "odd-length hex string");
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>((nibble(hex[2 * i], 2 * i) << 4) | nibble(hex[2 * i + 1], 2 * i + 1));
    return out;
}

}  // namespace comkex::wire
