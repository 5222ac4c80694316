#include "clk/errors.hpp"

namespace clk {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::Input: return "input error";
    case ErrorCode::Unsupported: return "unsupported query";
    case ErrorCode::BadMagic: return "bad magic";
    case ErrorCode::Truncated: return "truncated payload";
    case ErrorCode::ChecksumMismatch: return "checksum mismatch";
    case ErrorCode::CoverDefect: return "cover defect";
    case ErrorCode::WrongPiece: return "wrong piece";
    case ErrorCode::PartitionTooCoarse: return "partition too coarse";
    case ErrorCode::Structural: return "structural error";
    }
    return "unknown error";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace clk
