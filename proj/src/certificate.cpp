#include "bsauth/certificate.hpp"

#include <ctime>
#include <json.hpp>

#include "bsauth/error.hpp"

namespace bsauth {

namespace {

constexpr std::uint32_t kBodyMagic = 0x42534331;  // "BSC1"

// Each field is written as its own length-prefixed blob.
template <typename Fn>
void field(ByteWriter& out, Fn&& fill) {
    ByteWriter f;
    fill(f);
    out.blob(f.bytes());
}

template <typename Fn>
auto read_field(ByteReader& in, const char* name, Fn&& parse) {
    ByteReader f(in.blob());
    auto v = parse(f);
    f.expect_done(name);
    return v;
}

Bytes signed_signature(const crypto::Signature& sig) {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(sig.suite));
    w.raw(sig.bytes);
    return std::move(w).take();
}

}  // namespace

std::string to_string(CellId id) { return std::to_string(id.value); }

CellId parse_cell_id(const std::string& text) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(text, &used, 0);
    } catch (const std::exception&) {
        throw Error(ErrorCode::kInvalidArgument, "invalid cell id '" + text + "'");
    }
    if (used != text.size() || text.empty() || text[0] == '-') {
        throw Error(ErrorCode::kInvalidArgument, "invalid cell id '" + text + "'");
    }
    CellId id{v};
    if (!id.valid()) {
        throw Error(ErrorCode::kInvalidArgument, "cell id '" + text + "' exceeds 36 bits");
    }
    return id;
}

Bytes canonical_bytes(const CertificateBody& body) {
    ByteWriter w;
    w.u32(kBodyMagic);
    field(w, [&](ByteWriter& f) { f.u32(body.version); });
    field(w, [&](ByteWriter& f) { f.u64(body.serial); });
    field(w, [&](ByteWriter& f) { f.u8(static_cast<std::uint8_t>(body.signature_algorithm)); });
    field(w, [&](ByteWriter& f) { f.raw(as_bytes(body.issuer_id)); });
    field(w, [&](ByteWriter& f) {
        f.i64(body.validity.not_before);
        f.i64(body.validity.not_after);
    });
    field(w, [&](ByteWriter& f) { f.u64(body.subject_cell_id.value); });
    field(w, [&](ByteWriter& f) {
        f.u8(static_cast<std::uint8_t>(body.subject_public_key.suite()));
        f.raw(body.subject_public_key.bytes());
    });
    field(w, [&](ByteWriter& f) {
        f.i32(to_micro_degrees(body.location.latitude));
        f.i32(to_micro_degrees(body.location.longitude));
    });
    return std::move(w).take();
}

CertificateBody decode_body(ByteView bytes) {
    ByteReader in(bytes);
    if (in.u32() != kBodyMagic) throw Error(ErrorCode::kParse, "certificate body magic mismatch");
    CertificateBody body;
    body.version = read_field(in, "version", [](ByteReader& f) { return f.u32(); });
    body.serial = read_field(in, "serial", [](ByteReader& f) { return f.u64(); });
    body.signature_algorithm = read_field(
        in, "signature_algorithm", [](ByteReader& f) { return crypto::suite_from_byte(f.u8()); });
    body.issuer_id = read_field(in, "issuer_id", [](ByteReader& f) {
        auto b = f.raw(f.remaining());
        return std::string(b.begin(), b.end());
    });
    body.validity = read_field(in, "validity", [](ByteReader& f) {
        Validity v;
        v.not_before = f.i64();
        v.not_after = f.i64();
        return v;
    });
    body.subject_cell_id = read_field(in, "cell_id", [](ByteReader& f) { return CellId{f.u64()}; });
    body.subject_public_key = read_field(in, "public_key", [](ByteReader& f) {
        const auto suite = crypto::suite_from_byte(f.u8());
        return crypto::PublicKey::from_bytes(suite, f.raw(f.remaining()));
    });
    body.location = read_field(in, "location", [](ByteReader& f) {
        GeoPoint p;
        p.latitude = from_micro_degrees(f.i32());
        p.longitude = from_micro_degrees(f.i32());
        return p;
    });
    in.expect_done("certificate body");
    if (!body.location.valid()) {
        throw Error(ErrorCode::kParse, "certificate location outside WGS84 bounds");
    }
    if (!body.subject_cell_id.valid()) {
        throw Error(ErrorCode::kParse, "certificate cell id exceeds 36 bits");
    }
    return body;
}

Bytes encode_certificate(const BaseStationCertificate& cert) {
    ByteWriter w;
    w.blob(canonical_bytes(cert.body));
    w.blob(signed_signature(cert.issuer_signature));
    return std::move(w).take();
}

BaseStationCertificate decode_certificate(ByteView bytes) {
    ByteReader in(bytes);
    BaseStationCertificate cert;
    cert.body = decode_body(in.blob());
    ByteReader sig(in.blob());
    const auto suite = crypto::suite_from_byte(sig.u8());
    cert.issuer_signature = crypto::Signature::from_bytes(suite, sig.raw(sig.remaining()));
    in.expect_done("certificate");
    return cert;
}

std::string iso8601_utc(std::int64_t unix_seconds) {
    const std::time_t t = static_cast<std::time_t>(unix_seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string certificate_to_json(const BaseStationCertificate& cert) {
    const auto& b = cert.body;
    nlohmann::ordered_json j;
    j["version"] = b.version;
    j["serial"] = b.serial;
    j["signature_algorithm"] = crypto::suite_info(b.signature_algorithm).name;
    j["issuer"] = b.issuer_id;
    j["validity"] = {{"not_before", iso8601_utc(b.validity.not_before)},
                     {"not_after", iso8601_utc(b.validity.not_after)}};
    j["subject_cell_id"] = b.subject_cell_id.value;
    j["subject_public_key"] = {{"suite", crypto::suite_info(b.subject_public_key.suite()).name},
                               {"point", to_hex(b.subject_public_key.bytes())}};
    j["location"] = {{"latitude", b.location.latitude}, {"longitude", b.location.longitude}};
    j["certificate_signature"] = to_hex(cert.issuer_signature.bytes);
    return j.dump(2);
}

CertificateSigningRequest build_csr(CellId cell_id, const crypto::KeyPair& keypair,
                                    const GeoPoint& location, const Validity& validity,
                                    crypto::SuiteId suite) {
    location.validate();
    if (validity.not_before >= validity.not_after) {
        throw Error(ErrorCode::kInvalidValidity, "not_before must precede not_after");
    }
    if (!cell_id.valid()) {
        throw Error(ErrorCode::kInvalidArgument, "cell id exceeds 36 bits");
    }
    crypto::suite_info(suite);

    CertificateSigningRequest csr;
    csr.body.signature_algorithm = suite;
    csr.body.validity = validity;
    csr.body.subject_cell_id = cell_id;
    csr.body.subject_public_key = keypair.public_key;
    csr.body.location = location.quantized();
    csr.proof_of_possession = crypto::sign(keypair.private_key, canonical_bytes(csr.body));
    return csr;
}

CertificateIssuer::CertificateIssuer(std::string issuer_id, crypto::KeyPair keypair,
                                     IssuancePolicy policy)
    : issuer_id_(std::move(issuer_id)), keypair_(std::move(keypair)), policy_(policy) {}

BaseStationCertificate CertificateIssuer::sign_csr(const CertificateSigningRequest& csr) {
    const auto& req = csr.body;
    bool pop_ok = false;
    try {
        pop_ok = crypto::verify(req.subject_public_key, canonical_bytes(req),
                                csr.proof_of_possession);
    } catch (const Error&) {
        pop_ok = false;
    }
    if (!pop_ok) {
        throw Error(ErrorCode::kProofOfPossession,
                    "CSR proof of possession does not verify for cell " +
                        to_string(req.subject_cell_id));
    }
    req.location.validate();
    if (req.validity.not_before >= req.validity.not_after) {
        throw Error(ErrorCode::kInvalidValidity, "not_before must precede not_after");
    }
    if (req.validity.not_after - req.validity.not_before > policy_.max_validity_seconds) {
        throw Error(ErrorCode::kPolicyViolation, "requested validity exceeds policy maximum");
    }

    std::lock_guard lock(mu_);
    if (!policy_.allow_reissue && issued_.contains(req.subject_cell_id)) {
        throw Error(ErrorCode::kDuplicateCellId,
                    "cell " + to_string(req.subject_cell_id) + " already has a certificate");
    }
    BaseStationCertificate cert;
    cert.body = req;
    cert.body.serial = last_serial_ + 1;
    cert.body.issuer_id = issuer_id_;
    cert.body.signature_algorithm = keypair_.private_key.suite();
    cert.issuer_signature = crypto::sign(keypair_.private_key, canonical_bytes(cert.body));
    last_serial_ = cert.body.serial;
    issued_.insert(req.subject_cell_id);
    return cert;
}

BaseStationCertificate CertificateIssuer::self_certificate(const Validity& validity,
                                                           CellId id) const {
    if (validity.not_before >= validity.not_after) {
        throw Error(ErrorCode::kInvalidValidity, "not_before must precede not_after");
    }
    BaseStationCertificate cert;
    cert.body.serial = 0;
    cert.body.signature_algorithm = keypair_.private_key.suite();
    cert.body.issuer_id = issuer_id_;
    cert.body.validity = validity;
    cert.body.subject_cell_id = id;
    cert.body.subject_public_key = keypair_.public_key;
    cert.issuer_signature = crypto::sign(keypair_.private_key, canonical_bytes(cert.body));
    return cert;
}

const char* to_string(CertificateStatus s) {
    switch (s) {
        case CertificateStatus::kValid: return "valid";
        case CertificateStatus::kBadSignature: return "bad_signature";
        case CertificateStatus::kExpired: return "expired";
        case CertificateStatus::kNotYetValid: return "not_yet_valid";
    }
    return "unknown";
}

bool verify_certificate_signature(const crypto::PublicKey& issuer_key,
                                  const BaseStationCertificate& cert) {
    if (cert.body.signature_algorithm != issuer_key.suite() ||
        cert.issuer_signature.suite != issuer_key.suite()) {
        return false;
    }
    return crypto::verify(issuer_key, canonical_bytes(cert.body), cert.issuer_signature);
}

CertificateCheck verify_certificate(const crypto::PublicKey& issuer_key,
                                    const BaseStationCertificate& cert, std::int64_t now) {
    if (!verify_certificate_signature(issuer_key, cert)) return {CertificateStatus::kBadSignature};
    if (now < cert.body.validity.not_before) return {CertificateStatus::kNotYetValid};
    if (now > cert.body.validity.not_after) return {CertificateStatus::kExpired};
    return {CertificateStatus::kValid};
}

}  // namespace bsauth
