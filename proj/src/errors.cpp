#include "comkex/errors.hpp"

namespace comkex {

std::string_view errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::ZeroInverse: return "ZeroInverse";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InvalidDimension: return "InvalidDimension";
    case Errc::Singular: return "Singular";
    case Errc::DegenerateZ: return "DegenerateZ";
    case Errc::DegenerateKey: return "DegenerateKey";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::InvalidPublic: return "InvalidPublic";
    case Errc::ParseError: return "ParseError";
    case Errc::InsufficientRank: return "InsufficientRank";
    case Errc::InconsistentSystem: return "InconsistentSystem";
    case Errc::OutOfSpan: return "OutOfSpan";
    case Errc::NoSolution: return "NoSolution";
    case Errc::FrameTooLarge: return "FrameTooLarge";
    case Errc::UnknownTag: return "UnknownTag";
    case Errc::ChecksumMismatch: return "ChecksumMismatch";
    case Errc::ProtocolViolation: return "ProtocolViolation";
    case Errc::IncompleteTranscript: return "IncompleteTranscript";
    case Errc::Transport: return "Transport";
    }
    return "Unknown";
}

namespace {

std::string compose(Errc code, const std::string& what, std::optional<std::size_t> offset)
{
    std::string msg(errc_name(code));
    msg += ": ";
    msg += what;
    if (offset) {
        msg += " (at byte ";
        msg += std::to_string(*offset);
        msg += ")";
    }
    return msg;
}

}  // namespace

Error::Error(Errc code, const std::string& what, std::optional<std::size_t> offset)
    : std::runtime_error(compose(code, what, offset)), code_(code), offset_(offset)
{
}

void fail(Errc code, const std::string& what)
{
    throw Error(code, what);
}

}  // namespace comkex
