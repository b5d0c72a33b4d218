#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace comkex {

enum class Errc {
    ZeroInverse,
    DimensionMismatch,
    InvalidDimension,
    Singular,
    DegenerateZ,
    DegenerateKey,
    InvalidParams,
    InvalidPublic,
    ParseError,
    InsufficientRank,
    InconsistentSystem,
    OutOfSpan,
    NoSolution,
    FrameTooLarge,
    UnknownTag,
    ChecksumMismatch,
    ProtocolViolation,
    IncompleteTranscript,
    Transport,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library. The code identifies the failure
/// class; `offset()` is set for parse failures that know a byte position.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, std::optional<std::size_t> offset = std::nullopt);

    Errc code() const noexcept { return code_; }
    std::optional<std::size_t> offset() const noexcept { return offset_; }

private:
    Errc code_;
    std::optional<std::size_t> offset_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace comkex
