#include "bsauth/bytes.hpp"

#include "bsauth/error.hpp"

namespace bsauth {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::kUnsupportedSuite: return "unsupported_suite";
        case ErrorCode::kSuiteUnavailable: return "suite_unavailable";
        case ErrorCode::kSuiteMismatch: return "suite_mismatch";
        case ErrorCode::kInvalidKey: return "invalid_key";
        case ErrorCode::kInvalidArgument: return "invalid_argument";
        case ErrorCode::kCoordinateOutOfRange: return "coordinate_out_of_range";
        case ErrorCode::kInvalidValidity: return "invalid_validity";
        case ErrorCode::kProofOfPossession: return "proof_of_possession";
        case ErrorCode::kDuplicateCellId: return "duplicate_cell_id";
        case ErrorCode::kPolicyViolation: return "policy_violation";
        case ErrorCode::kUnauthorizedWriter: return "unauthorized_writer";
        case ErrorCode::kInvalidCertificate: return "invalid_certificate";
        case ErrorCode::kParse: return "parse";
        case ErrorCode::kChainVerification: return "chain_verification";
        case ErrorCode::kConfig: return "config";
        case ErrorCode::kIo: return "io";
    }
    return "unknown";
}

std::string to_hex(ByteView bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

namespace {
int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        throw Error(ErrorCode::kParse, "hex string has odd length");
    }
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = nibble(hex[2 * i]);
        const int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) {
            throw Error(ErrorCode::kParse, "invalid hex digit");
        }
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

ByteView ByteReader::raw(std::size_t n) {
    if (n > remaining()) {
        throw Error(ErrorCode::kParse, "truncated input: need " + std::to_string(n) +
                                           " bytes at offset " + std::to_string(pos_) +
                                           ", have " + std::to_string(remaining()));
    }
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::string ByteReader::str() {
    auto b = blob();
    return {b.begin(), b.end()};
}

void ByteReader::expect_done(const char* what) const {
    if (!done()) {
        throw Error(ErrorCode::kParse, std::string(what) + ": " + std::to_string(remaining()) +
                                           " trailing bytes");
    }
}

std::uint64_t ByteReader::get_be(int width) {
    auto b = raw(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

}  // namespace bsauth
