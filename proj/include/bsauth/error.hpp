#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bsauth {

enum class ErrorCode : std::uint8_t {
    kUnsupportedSuite,
    kSuiteUnavailable,
    kSuiteMismatch,
    kInvalidKey,
    kInvalidArgument,
    kCoordinateOutOfRange,
    kInvalidValidity,
    kProofOfPossession,
    kDuplicateCellId,
    kPolicyViolation,
    kUnauthorizedWriter,
    kInvalidCertificate,
    kParse,
    kChainVerification,
    kConfig,
    kIo,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure the library reports is an Error carrying a code; callers that
// only care about the category switch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace bsauth
