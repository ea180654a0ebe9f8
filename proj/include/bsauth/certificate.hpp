#pragma once

#include <compare>
#include <cstdint>
#include <mutex>
#include <set>
#include <string>

#include "bsauth/bytes.hpp"
#include "bsauth/crypto.hpp"
#include "bsauth/geo.hpp"

namespace bsauth {

/// NR cell identity: 36 significant bits carried in a 64-bit field.
struct CellId {
    static constexpr std::uint64_t kMax = (std::uint64_t{1} << 36) - 1;

    std::uint64_t value = 0;

    bool valid() const { return value <= kMax; }
    friend auto operator<=>(const CellId&, const CellId&) = default;
};

std::string to_string(CellId id);
/// Decimal or 0x-prefixed hex; throws kInvalidArgument when out of range.
CellId parse_cell_id(const std::string& text);

/// Unix-second interval, both ends inclusive.
struct Validity {
    std::int64_t not_before = 0;
    std::int64_t not_after = 0;

    bool contains(std::int64_t now) const { return now >= not_before && now <= not_after; }
    friend bool operator==(const Validity&, const Validity&) = default;
};

struct CertificateBody {
    std::uint32_t version = 3;
    std::uint64_t serial = 0;
    crypto::SuiteId signature_algorithm{};
    std::string issuer_id;
    Validity validity;
    CellId subject_cell_id;
    crypto::PublicKey subject_public_key;
    GeoPoint location;

    friend bool operator==(const CertificateBody&, const CertificateBody&) = default;
};

/// Length-prefixed fields in declaration order, big-endian integers and
/// coordinates as signed micro-degrees. This is the only form ever signed.
Bytes canonical_bytes(const CertificateBody& body);
CertificateBody decode_body(ByteView bytes);

struct CertificateSigningRequest {
    CertificateBody body;
    crypto::Signature proof_of_possession;
};

struct BaseStationCertificate {
    CertificateBody body;
    crypto::Signature issuer_signature;

    friend bool operator==(const BaseStationCertificate&, const BaseStationCertificate&) = default;
};

Bytes encode_certificate(const BaseStationCertificate& cert);
BaseStationCertificate decode_certificate(ByteView bytes);
/// Human-readable export; ISO-8601 validity and decimal-degree coordinates.
std::string certificate_to_json(const BaseStationCertificate& cert);
std::string iso8601_utc(std::int64_t unix_seconds);

/// Throws kCoordinateOutOfRange, kInvalidValidity or kInvalidArgument (cell id
/// beyond 36 bits). The location is quantized to the canonical grid.
CertificateSigningRequest build_csr(CellId cell_id, const crypto::KeyPair& keypair,
                                    const GeoPoint& location, const Validity& validity,
                                    crypto::SuiteId suite);

struct IssuancePolicy {
    std::int64_t max_validity_seconds = 5 * 365 * 86400;
    /// Re-issuing a certificate for an already certified cell ID.
    bool allow_reissue = false;
};

/// The core network's certificate authority. Serial numbers strictly increase;
/// sign_csr is serialized internally, so one issuer may be shared.
class CertificateIssuer {
public:
    CertificateIssuer(std::string issuer_id, crypto::KeyPair keypair, IssuancePolicy policy = {});

    /// Throws kProofOfPossession, kDuplicateCellId or kPolicyViolation.
    BaseStationCertificate sign_csr(const CertificateSigningRequest& csr);

    /// Self-signed record publishing the issuer key, used as the genesis payload.
    BaseStationCertificate self_certificate(const Validity& validity, CellId id = {}) const;

    const std::string& issuer_id() const { return issuer_id_; }
    const crypto::PublicKey& public_key() const { return keypair_.public_key; }
    const crypto::KeyPair& keypair() const { return keypair_; }
    const IssuancePolicy& policy() const { return policy_; }

private:
    std::string issuer_id_;
    crypto::KeyPair keypair_;
    IssuancePolicy policy_;
    std::mutex mu_;
    std::uint64_t last_serial_ = 0;
    std::set<CellId> issued_;
};

enum class CertificateStatus : std::uint8_t { kValid, kBadSignature, kExpired, kNotYetValid };

const char* to_string(CertificateStatus s);

struct CertificateCheck {
    CertificateStatus status = CertificateStatus::kBadSignature;
    explicit operator bool() const { return status == CertificateStatus::kValid; }
};

CertificateCheck verify_certificate(const crypto::PublicKey& issuer_key,
                                    const BaseStationCertificate& cert, std::int64_t now);
/// Signature check only, ignoring the validity window.
bool verify_certificate_signature(const crypto::PublicKey& issuer_key,
                                  const BaseStationCertificate& cert);

}  // namespace bsauth
