#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "bsauth/certificate.hpp"
#include "bsauth/error.hpp"
#include "bsauth/fleet.hpp"
#include "bsauth/keyfile.hpp"
#include "support.hpp"

using namespace bsauth;
using bsauth::testing::kNow;
using bsauth::testing::one_year;
using crypto::SuiteId;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("cell ids parse in decimal and hex") {
    CHECK(parse_cell_id("1715004").value == 1715004);
    CHECK(parse_cell_id("0x1A2B3C").value == 0x1A2B3C);
    CHECK(parse_cell_id("0xFFFFFFFFF").value == CellId::kMax);
    CHECK_THROWS_AS(parse_cell_id("0x1000000000"), Error);
    CHECK_THROWS_AS(parse_cell_id("12ab"), Error);
    CHECK_THROWS_AS(parse_cell_id(""), Error);
}

TEST_CASE("issued certificate verifies and round-trips") {
    const auto core = crypto::generate_keypair(SuiteId::kEcdsa256, 1);
    const auto bs = crypto::generate_keypair(SuiteId::kEcdsa224, 2);
    CertificateIssuer issuer("core-network", core);
    const auto cert =
        issuer.sign_csr(build_csr(CellId{0x1A2B3C}, bs, {41.6611, -91.5302}, one_year(), SuiteId::kEcdsa224));

    CHECK(cert.body.version == 3);
    CHECK(cert.body.serial == 1);
    CHECK(cert.body.issuer_id == "core-network");
    CHECK(cert.body.signature_algorithm == SuiteId::kEcdsa256);
    CHECK(cert.body.subject_public_key == bs.public_key);
    CHECK(static_cast<bool>(verify_certificate(core.public_key, cert, kNow)));

    const auto wire = encode_certificate(cert);
    CHECK(decode_certificate(wire) == cert);
    CHECK(encode_certificate(decode_certificate(wire)) == wire);
    CHECK(decode_body(canonical_bytes(cert.body)) == cert.body);

    const auto j = nlohmann::json::parse(certificate_to_json(cert));
    CHECK(j["subject_cell_id"] == 0x1A2B3C);
    CHECK(j["validity"]["not_before"] == iso8601_utc(kNow - 86400));
}

TEST_CASE("validity bounds are inclusive") {
    const auto core = crypto::generate_keypair(SuiteId::kEcdsa256, 1);
    const auto bs = crypto::generate_keypair(SuiteId::kEcdsa224, 2);
    CertificateIssuer issuer("core", core);
    const Validity v{kNow, kNow + 100};
    const auto cert = issuer.sign_csr(build_csr(CellId{5}, bs, {0, 0}, v, SuiteId::kEcdsa224));
    CHECK(verify_certificate(core.public_key, cert, kNow).status == CertificateStatus::kValid);
    CHECK(verify_certificate(core.public_key, cert, kNow + 100).status == CertificateStatus::kValid);
    CHECK(verify_certificate(core.public_key, cert, kNow - 1).status == CertificateStatus::kNotYetValid);
    CHECK(verify_certificate(core.public_key, cert, kNow + 101).status == CertificateStatus::kExpired);
    CHECK(iso8601_utc(0) == "1970-01-01T00:00:00Z");
    CHECK(iso8601_utc(1760000000) == "2025-10-09T08:53:20Z");
}

TEST_CASE("tampered certificates fail signature checks") {
    const auto core = crypto::generate_keypair(SuiteId::kEcdsa256, 1);
    const auto bs = crypto::generate_keypair(SuiteId::kEcdsa224, 2);
    CertificateIssuer issuer("core", core);
    const auto cert = issuer.sign_csr(build_csr(CellId{5}, bs, {10, 10}, one_year(), SuiteId::kEcdsa224));

    auto moved = cert;
    moved.body.location.latitude += 0.001;
    CHECK_FALSE(verify_certificate_signature(core.public_key, moved));
    auto rekeyed = cert;
    rekeyed.body.subject_cell_id = CellId{6};
    CHECK(verify_certificate(core.public_key, rekeyed, kNow).status == CertificateStatus::kBadSignature);

    const auto other = crypto::generate_keypair(SuiteId::kEcdsa256, 3);
    CHECK_FALSE(verify_certificate_signature(other.public_key, cert));
}

TEST_CASE("issuer enforces proof of possession, policy and uniqueness") {
    const auto core = crypto::generate_keypair(SuiteId::kEcdsa256, 1);
    const auto bs = crypto::generate_keypair(SuiteId::kEcdsa224, 2);
    const auto thief = crypto::generate_keypair(SuiteId::kEcdsa224, 3);
    CertificateIssuer issuer("core", core);

    auto csr = build_csr(CellId{7}, bs, {1, 1}, one_year(), SuiteId::kEcdsa224);
    auto stolen = csr;
    stolen.body.subject_public_key = thief.public_key;
    CHECK(code_of([&] { issuer.sign_csr(stolen); }) == ErrorCode::kProofOfPossession);

    const auto first = issuer.sign_csr(csr);
    CHECK(code_of([&] { issuer.sign_csr(csr); }) == ErrorCode::kDuplicateCellId);

    const Validity too_long{kNow, kNow + 6LL * 365 * 86400};
    CHECK(code_of([&] {
              issuer.sign_csr(build_csr(CellId{8}, bs, {1, 1}, too_long, SuiteId::kEcdsa224));
          }) == ErrorCode::kPolicyViolation);
    CHECK(code_of([&] {
              build_csr(CellId{9}, bs, {1, 1}, Validity{kNow, kNow - 1}, SuiteId::kEcdsa224);
          }) == ErrorCode::kInvalidValidity);
    CHECK(code_of([&] { build_csr(CellId{9}, bs, {95, 1}, one_year(), SuiteId::kEcdsa224); }) ==
          ErrorCode::kCoordinateOutOfRange);
    CHECK(code_of([&] {
              build_csr(CellId{CellId::kMax + 1}, bs, {1, 1}, one_year(), SuiteId::kEcdsa224);
          }) == ErrorCode::kInvalidArgument);

    const auto second = issuer.sign_csr(build_csr(CellId{10}, bs, {1, 1}, one_year(), SuiteId::kEcdsa224));
    CHECK(second.body.serial > first.body.serial);

    CertificateIssuer lenient("core", core, IssuancePolicy{5LL * 365 * 86400, true});
    lenient.sign_csr(csr);
    CHECK_NOTHROW(lenient.sign_csr(csr));
}

TEST_CASE("certificate decoding rejects garbage") {
    const auto core = crypto::generate_keypair(SuiteId::kEcdsa256, 1);
    CertificateIssuer issuer("core", core);
    const auto self = issuer.self_certificate(one_year());
    auto wire = encode_certificate(self);
    CHECK_THROWS_AS(decode_certificate(Bytes(wire.begin(), wire.end() - 1)), Error);
    wire.push_back(0);
    CHECK_THROWS_AS(decode_certificate(wire), Error);
    CHECK_THROWS_AS(decode_certificate(Bytes{}), Error);
}

TEST_CASE("fleet csv parsing") {
    std::istringstream ok("latitude,cell_id,longitude,owner\n41.66,0x10,-91.53,acme\n\n42.0,17,-91.0,acme\n");
    const auto fleet = parse_fleet_csv(ok);
    REQUIRE(fleet.records.size() == 2);
    CHECK(fleet.records[0].cell_id.value == 16);
    CHECK(fleet.records[1].location == (GeoPoint{42.0, -91.0}));
    CHECK(fleet.warnings.size() == 1);

    std::istringstream dup("cell_id,latitude,longitude\n5,1,1\n6,1,1\n5,2,2\n");
    try {
        parse_fleet_csv(dup);
        FAIL("duplicate accepted");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    std::istringstream bad("cell_id,latitude,longitude\n5,91,1\n");
    CHECK_THROWS_AS(parse_fleet_csv(bad), Error);
    std::istringstream headerless("5,1,1\n");
    CHECK_THROWS_AS(parse_fleet_csv(headerless), Error);
}

TEST_CASE("key files round-trip and reject mismatched halves") {
    const auto kp = crypto::generate_keypair(SuiteId::kEcdsa384, 4);
    const auto back = keypair_from_json(keypair_to_json(kp));
    CHECK(back.public_key == kp.public_key);
    CHECK(back.private_key.bytes() == kp.private_key.bytes());

    auto j = nlohmann::json::parse(keypair_to_json(kp));
    j["public"] = to_hex(crypto::generate_keypair(SuiteId::kEcdsa384, 5).public_key.bytes());
    CHECK(code_of([&] { keypair_from_json(j.dump()); }) == ErrorCode::kInvalidKey);
    CHECK(code_of([&] { keypair_from_json("{"); }) == ErrorCode::kParse);
    CHECK(code_of([&] { keypair_from_json(R"({"suite":"ecdsa-1","private":"00"})"); }) ==
          ErrorCode::kUnsupportedSuite);
}
