#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bsauth/bytes.hpp"
#include "bsauth/certificate.hpp"
#include "bsauth/crypto.hpp"

namespace bsauth::rrc {

/// Largest SIB1 the 5G NR transport block carries: 2976 bits.
inline constexpr std::size_t kSib1Limit = 372;
/// Bytes of the nonce and timestamp appended by both schemes.
inline constexpr std::size_t kFreshnessBytes = 8;
/// The 36-bit cell identity is carried in the first 5 bytes of the SIB1 body.
inline constexpr std::size_t kCellIdentityBytes = 5;
/// Unsigned SIB1 size used by reports unless overridden. See base_size_window().
inline constexpr std::size_t kDefaultBaseSize = 50;

enum class Scheme : std::uint8_t { kOurs, kSota };

const char* to_string(Scheme s);
Scheme parse_scheme(const std::string& s);

/// Unsigned SIB1 content. base_fields holds the encoded cell identity
/// followed by opaque PLMN/TAC/frequency/scheduling parameters.
class Sib1Payload {
public:
    static Sib1Payload make(CellId cell_id, ByteView parameters);
    /// Deterministic filler parameters so that base_size() == base_size.
    static Sib1Payload synthetic(CellId cell_id, std::size_t base_size, std::uint64_t seed = 0);
    /// Throws kParse when shorter than the cell identity.
    static Sib1Payload from_bytes(ByteView base_fields);

    CellId cell_id() const { return cell_id_; }
    const Bytes& base_fields() const { return base_fields_; }
    std::size_t base_size() const { return base_fields_.size(); }

    friend bool operator==(const Sib1Payload&, const Sib1Payload&) = default;

private:
    CellId cell_id_;
    Bytes base_fields_;
};

/// {SIB1, n, t, S_k(SIB1, n, t)}.
struct SignedSib1 {
    Sib1Payload payload;
    std::uint32_t nonce = 0;
    std::uint32_t timestamp = 0;
    crypto::Signature signature;

    std::size_t wire_size() const;
    friend bool operator==(const SignedSib1&, const SignedSib1&) = default;
};

/// base_fields || n || t, big-endian; the signed message.
Bytes signing_bytes(const Sib1Payload& payload, std::uint32_t nonce, std::uint32_t timestamp);

SignedSib1 sign_sib1(const crypto::PrivateKey& bs_key, const Sib1Payload& payload,
                     std::uint32_t nonce, std::uint32_t timestamp);
bool verify_sib1(const crypto::PublicKey& bs_key, const SignedSib1& frame);

/// SIB1 body, n, t, then the fixed-width signature. No length prefix is
/// needed: the receiver knows the suite's signature size from the ledger.
Bytes encode(const SignedSib1& frame);
SignedSib1 decode_signed_sib1(ByteView wire, crypto::SuiteId suite);

/// Chain material a certificate-chain base station carries offline: an
/// intermediary (MME/AMF) credential signed by the core network and a base
/// station credential signed by the intermediary.
struct SotaCredentials {
    crypto::PublicKey intermediary_public_key;
    crypto::PublicKey bs_public_key;
    CellId cell_id;
    crypto::Signature core_over_intermediary;
    crypto::Signature intermediary_over_bs;
};

Bytes intermediary_credential_bytes(const crypto::PublicKey& intermediary);
Bytes bs_credential_bytes(CellId cell_id, const crypto::PublicKey& bs_key);

SotaCredentials issue_sota_credentials(const crypto::PrivateKey& core,
                                       const crypto::PrivateKey& intermediary,
                                       const crypto::PublicKey& bs_key, CellId cell_id);

/// Certificate-chain SIB1: both public keys travel in-band with three
/// signatures (core over intermediary, intermediary over base station, base
/// station over SIB1). n and t are kept for a like-for-like comparison.
struct SotaSib1 {
    Sib1Payload payload;
    std::uint32_t nonce = 0;
    std::uint32_t timestamp = 0;
    crypto::PublicKey bs_public_key;
    crypto::PublicKey intermediary_public_key;
    std::array<crypto::Signature, 3> chain_signatures;

    std::size_t wire_size() const;
};

SotaSib1 sign_sota_sib1(const crypto::PrivateKey& bs_key, const SotaCredentials& creds,
                        const Sib1Payload& payload, std::uint32_t nonce, std::uint32_t timestamp);
Bytes encode(const SotaSib1& frame);
SotaSib1 decode_sota_sib1(ByteView wire, crypto::SuiteId suite);

std::size_t encoded_size(Scheme scheme, crypto::SuiteId suite, std::size_t base_size);
inline bool check_budget(std::size_t size) { return size <= kSib1Limit; }

struct BudgetRow {
    Scheme scheme;
    crypto::SuiteId suite;
    std::size_t size;
    bool fits;
};

/// One row per (scheme, suite).
std::vector<BudgetRow> budget_table(std::size_t base_size = kDefaultBaseSize);
std::string budget_table_csv(const std::vector<BudgetRow>& rows);
std::string budget_table_markdown(const std::vector<BudgetRow>& rows);

/// Inclusive range of base sizes for which every suite fits with one
/// signature while the chain encoding fits only with ECDSA-224.
struct BaseSizeWindow {
    std::size_t lo;
    std::size_t hi;
};
BaseSizeWindow base_size_window();

}  // namespace bsauth::rrc
