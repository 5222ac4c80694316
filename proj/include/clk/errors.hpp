#pragma once

#include <stdexcept>
#include <string>

namespace clk {

enum class ErrorCode {
    Input,
    Unsupported,
    BadMagic,
    Truncated,
    ChecksumMismatch,
    CoverDefect,
    WrongPiece,
    PartitionTooCoarse,
    Structural,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct InputError : Error {
    explicit InputError(const std::string& what) : Error(ErrorCode::Input, what) {}
};

// A decoder was asked something outside the query class its labels support.
struct UnsupportedQuery : Error {
    explicit UnsupportedQuery(const std::string& what) : Error(ErrorCode::Unsupported, what) {}
};

struct FormatError : Error {
    FormatError(ErrorCode code, const std::string& what) : Error(code, what) {}
};

struct CoverDefect : Error {
    explicit CoverDefect(const std::string& what) : Error(ErrorCode::CoverDefect, what) {}
};

struct WrongPiece : Error {
    explicit WrongPiece(const std::string& what) : Error(ErrorCode::WrongPiece, what) {}
};

struct PartitionTooCoarse : Error {
    PartitionTooCoarse(const std::string& what, std::size_t measured_parts)
        : Error(ErrorCode::PartitionTooCoarse, what), parts(measured_parts) {}
    std::size_t parts;
};

struct StructuralError : Error {
    explicit StructuralError(const std::string& what) : Error(ErrorCode::Structural, what) {}
};

}  // namespace clk
