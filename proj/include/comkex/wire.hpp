#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "comkex/attacks.hpp"
#include "comkex/codec.hpp"
#include "comkex/kex.hpp"
#include "comkex/transport.hpp"

// Framed exchange between two peers.
//
// Frame on the wire: 4-byte big-endian payload length, 1-byte tag, payload.
//
//   initiator -> PARAMS   canonical params JSON
//   initiator -> PUBKEY   xi_A as 8-byte big-endian entries
//   responder -> PUBKEY   xi_B
//   both      -> CONFIRM  checksum64 of the shared-key bytes, 8 bytes BE

namespace comkex::wire {

enum class Tag : std::uint8_t { Params = 0x01, PubKey = 0x02, Confirm = 0x03 };

inline constexpr std::size_t kHeaderSize = 5;
inline constexpr std::size_t kMaxPayload = std::size_t{1} << 20;

struct Frame {
    Tag tag = Tag::Confirm;
    std::vector<std::uint8_t> payload;

    friend bool operator==(const Frame&, const Frame&) = default;
};

/// Throws FrameTooLarge for payloads above kMaxPayload.
std::vector<std::uint8_t> encode_frame(const Frame& frame);

/// `frame` is empty when more bytes are needed (NeedMoreBytes); otherwise
/// `consumed` is the frame's full wire length.
struct DecodeResult {
    std::optional<Frame> frame;
    std::size_t consumed = 0;

    bool need_more_bytes() const noexcept { return !frame.has_value(); }
};

/// Incremental decode of the first frame in `bytes`. Throws FrameTooLarge
/// or UnknownTag as soon as the header shows the problem.
DecodeResult decode_frame(std::span<const std::uint8_t> bytes);

std::string_view tag_name(Tag tag) noexcept;

/// FNV-1a, 64-bit.
std::uint64_t checksum64(std::span<const std::uint8_t> bytes) noexcept;

/// Reads whole frames off a stream.
class FrameReader {
public:
    explicit FrameReader(Transport& transport) : transport_(transport) {}
    /// Throws Error(Transport) when the stream ends mid-session.
    Frame next();

private:
    Transport& transport_;
    std::vector<std::uint8_t> buffer_;
};

enum class Direction { InitiatorToResponder, ResponderToInitiator };

struct TranscriptEntry {
    Direction dir;
    Frame frame;

    friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

/// Append-only record of one session as seen by one endpoint.
class Transcript {
public:
    void append(Direction dir, Frame frame) { entries_.push_back({dir, std::move(frame)}); }
    const std::vector<TranscriptEntry>& entries() const noexcept { return entries_; }

    /// {"frames": [{"dir": "i2r"|"r2i", "tag": "PARAMS"|..., "payload_hex": "..."}]}
    codec::Json to_json() const;
    static Transcript from_json(const codec::Json& j);

    friend bool operator==(const Transcript&, const Transcript&) = default;

private:
    std::vector<TranscriptEntry> entries_;
};

struct SessionResult {
    SharedKey shared;
    std::uint64_t checksum = 0;
    Transcript transcript;
};

/// Sends params and its public key, waits for the peer's key, confirms.
/// Throws ProtocolViolation on an out-of-order frame and
/// ChecksumMismatch when the peer's confirmation differs.
SessionResult run_initiator(const PublicParams& params, const KeyPair& keys, Transport& transport);

/// Produces the responder's key pair once params have arrived.
using KeySource = std::function<KeyPair(const PublicParams&)>;

SessionResult run_responder(Transport& transport, const KeySource& keys);

struct EavesdropResult {
    SharedKey shared;
    /// True when every CONFIRM seen carries the checksum of `shared`
    /// and at least one was seen.
    bool verified = false;
    std::size_t confirms_seen = 0;
    PassiveRecovery detail;
};

/// Recovers the session key from a transcript using only public frames.
/// Throws IncompleteTranscript without PARAMS and both PUBKEY frames.
EavesdropResult eavesdrop(const Transcript& transcript);

/// Accepts `sessions` connections, each answered on its own thread.
/// `on_done` runs on the session's thread with either a result or the
/// exception that ended the session.
void serve(TcpListener& listener, std::size_t sessions, const KeySource& keys,
           const std::function<void(std::size_t, const SessionResult*, std::exception_ptr)>& on_done);

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Throws ParseError on odd length or a non-hex digit.
std::vector<std::uint8_t> from_hex(std::string_view hex);

}  // namespace comkex::wire
