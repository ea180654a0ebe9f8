#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "bsauth/bytes.hpp"

namespace bsauth::crypto {

enum class SuiteId : std::uint8_t {
    kEcdsa224 = 1,
    kEcdsa256 = 2,
    kEcdsa384 = 3,
    kEcdsa521 = 4,
    kEcdsa571 = 5,
};

/// Static description of a signature suite. All sizes are fixed per suite so
/// packet budgets never depend on message content.
struct SuiteInfo {
    SuiteId id;
    const char* name;        // "ECDSA-224"
    const char* slug;        // "ecdsa-224"
    const char* curve;       // OpenSSL short name
    int key_bits;
    std::size_t component_size;  // bytes per r / s component
    std::size_t signature_size;  // 2 * component_size
    std::size_t public_key_size; // uncompressed SEC1 point
};

struct SuiteSizes {
    std::size_t signature_size;
    std::size_t public_key_size;
};

std::span<const SuiteInfo> all_suites();
const SuiteInfo& suite_info(SuiteId id);
SuiteSizes suite_sizes(SuiteId id);
/// Accepts "ecdsa-224", "ECDSA-224" or "224". Throws kUnsupportedSuite.
SuiteId parse_suite(std::string_view name);
/// Validates a wire byte; throws kUnsupportedSuite.
SuiteId suite_from_byte(std::uint8_t b);
/// False when the linked backend lacks the curve; sizes remain valid.
bool suite_available(SuiteId id);
/// suite_id,key_bits,signature_size,public_key_size with a header row.
std::string suite_table_csv();

namespace detail {
struct KeyHandle;
}

struct Signature {
    SuiteId suite{};
    Bytes bytes;

    /// Checks the length against the suite's signature_size.
    static Signature from_bytes(SuiteId suite, ByteView bytes);

    friend bool operator==(const Signature&, const Signature&) = default;
};

class PublicKey {
public:
    /// Parses an uncompressed SEC1 point and checks it lies on the curve.
    static PublicKey from_bytes(SuiteId suite, ByteView encoded);

    SuiteId suite() const { return suite_; }
    const Bytes& bytes() const { return encoded_; }

    friend bool operator==(const PublicKey& a, const PublicKey& b) {
        return a.suite_ == b.suite_ && a.encoded_ == b.encoded_;
    }

private:
    friend class PrivateKey;
    friend bool verify(const PublicKey&, ByteView, const Signature&);

    SuiteId suite_{};
    Bytes encoded_;
    std::shared_ptr<const detail::KeyHandle> handle_;
};

class PrivateKey {
public:
    /// Big-endian scalar, fixed width for the suite.
    static PrivateKey from_bytes(SuiteId suite, ByteView scalar);

    SuiteId suite() const { return suite_; }
    const Bytes& bytes() const { return scalar_; }
    const PublicKey& public_key() const { return public_; }

private:
    friend Signature sign(const PrivateKey&, ByteView);

    SuiteId suite_{};
    Bytes scalar_;
    PublicKey public_;
    std::shared_ptr<const detail::KeyHandle> handle_;
};

struct KeyPair {
    PublicKey public_key;
    PrivateKey private_key;
};

/// A seed makes the pair bit-identical across runs and processes.
KeyPair generate_keypair(SuiteId suite, std::optional<std::uint64_t> seed = std::nullopt);

/// ECDSA with RFC 6979 nonces, so equal (key, message) give equal signatures.
Signature sign(const PrivateKey& key, ByteView message);

/// Throws kSuiteMismatch when key and signature suites differ; every other
/// failure is a false return.
bool verify(const PublicKey& key, ByteView message, const Signature& sig);

Digest sha256(ByteView data);

}  // namespace bsauth::crypto
