#include <doctest.h>

#include <random>

#include "bsauth/error.hpp"
#include "bsauth/rrc.hpp"

using namespace bsauth;
using crypto::SuiteId;
using rrc::Scheme;

TEST_CASE("packet sizes follow the fixed formulas") {
    struct Row {
        SuiteId suite;
        std::size_t ours_overhead;
        std::size_t sota_overhead;
    };
    const Row rows[] = {
        {SuiteId::kEcdsa224, 72, 8 + 2 * 57 + 3 * 64},
        {SuiteId::kEcdsa256, 72, 8 + 2 * 65 + 3 * 64},
        {SuiteId::kEcdsa384, 104, 8 + 2 * 97 + 3 * 96},
        {SuiteId::kEcdsa521, 140, 8 + 2 * 133 + 3 * 132},
        {SuiteId::kEcdsa571, 152, 8 + 2 * 145 + 3 * 144},
    };
    for (const auto& r : rows) {
        CHECK(rrc::encoded_size(Scheme::kOurs, r.suite, 100) == 100 + r.ours_overhead);
        CHECK(rrc::encoded_size(Scheme::kSota, r.suite, 100) == 100 + r.sota_overhead);
    }
}

TEST_CASE("default base size sits inside the budget window") {
    const auto win = rrc::base_size_window();
    CHECK(win.lo == 43);
    CHECK(win.hi == 58);
    CHECK(rrc::kDefaultBaseSize >= win.lo);
    CHECK(rrc::kDefaultBaseSize <= win.hi);
    for (const auto& row : rrc::budget_table()) {
        const bool expect = row.scheme == Scheme::kOurs || row.suite == SuiteId::kEcdsa224;
        CHECK(row.fits == expect);
    }
    CHECK(rrc::check_budget(372));
    CHECK_FALSE(rrc::check_budget(373));
}

TEST_CASE("signed frames round-trip at their declared size") {
    std::mt19937_64 rng(17);
    for (const auto& info : crypto::all_suites()) {
        if (!crypto::suite_available(info.id)) continue;
        const std::string name = info.name;
        CAPTURE(name);
        const auto kp = crypto::generate_keypair(info.id, 5);
        for (int i = 0; i < 5; ++i) {
            const std::size_t base = 5 + rng() % 200;
            const auto payload = rrc::Sib1Payload::synthetic(CellId{rng() & CellId::kMax}, base, rng());
            const auto f = rrc::sign_sib1(kp.private_key, payload, static_cast<std::uint32_t>(rng()),
                                          1'760'000'000);
            const auto wire = rrc::encode(f);
            CHECK(wire.size() == f.wire_size());
            CHECK(wire.size() == rrc::encoded_size(Scheme::kOurs, info.id, base));
            const auto back = rrc::decode_signed_sib1(wire, info.id);
            CHECK(back == f);
            CHECK(rrc::verify_sib1(kp.public_key, back));
        }
    }
}

TEST_CASE("frame tampering breaks the signature") {
    const auto kp = crypto::generate_keypair(SuiteId::kEcdsa224, 8);
    const auto payload = rrc::Sib1Payload::synthetic(CellId{0x1A2B3C}, 50, 1);
    const auto f = rrc::sign_sib1(kp.private_key, payload, 77, 1'760'000'000);
    const auto wire = rrc::encode(f);
    for (std::size_t i = 0; i < wire.size(); ++i) {
        Bytes bad = wire;
        bad[i] ^= 0x10;
        bool ok = false;
        try {
            ok = rrc::verify_sib1(kp.public_key, rrc::decode_signed_sib1(bad, SuiteId::kEcdsa224));
        } catch (const Error&) {
            ok = false;
        }
        CHECK_FALSE(ok);
    }
    const auto other = crypto::generate_keypair(SuiteId::kEcdsa256, 8);
    CHECK_FALSE(rrc::verify_sib1(other.public_key, f));
}

TEST_CASE("payload carries the cell identity") {
    const auto p = rrc::Sib1Payload::make(CellId{0xABCDEF012}, Bytes{9, 9});
    CHECK(p.base_size() == 7);
    CHECK(p.base_fields()[0] == 0x0A);
    CHECK(rrc::Sib1Payload::from_bytes(p.base_fields()).cell_id().value == 0xABCDEF012);
    CHECK_THROWS_AS(rrc::Sib1Payload::from_bytes(Bytes{1, 2, 3}), Error);
    CHECK_THROWS_AS(rrc::Sib1Payload::synthetic(CellId{1}, 4), Error);
    CHECK(rrc::Sib1Payload::synthetic(CellId{1}, 60, 3) == rrc::Sib1Payload::synthetic(CellId{1}, 60, 3));
    CHECK_THROWS_AS(rrc::decode_signed_sib1(Bytes(20), SuiteId::kEcdsa224), Error);
}

TEST_CASE("certificate-chain frames") {
    const auto root = crypto::generate_keypair(SuiteId::kEcdsa224, 1);
    const auto mid = crypto::generate_keypair(SuiteId::kEcdsa224, 2);
    const auto bs = crypto::generate_keypair(SuiteId::kEcdsa224, 3);
    const CellId cell{0x55};
    const auto creds = rrc::issue_sota_credentials(root.private_key, mid.private_key, bs.public_key, cell);
    const auto payload = rrc::Sib1Payload::synthetic(cell, 50, 0);
    const auto f = rrc::sign_sota_sib1(bs.private_key, creds, payload, 1, 2);
    const auto wire = rrc::encode(f);
    CHECK(wire.size() == 364);
    CHECK(wire.size() == f.wire_size());
    const auto back = rrc::decode_sota_sib1(wire, SuiteId::kEcdsa224);
    CHECK(back.bs_public_key == bs.public_key);
    CHECK(back.intermediary_public_key == mid.public_key);
    CHECK(back.chain_signatures == f.chain_signatures);
    CHECK(crypto::verify(root.public_key, rrc::intermediary_credential_bytes(mid.public_key),
                         back.chain_signatures[0]));
    CHECK(crypto::verify(mid.public_key, rrc::bs_credential_bytes(cell, bs.public_key),
                         back.chain_signatures[1]));
}

TEST_CASE("budget tables render") {
    const auto rows = rrc::budget_table(50);
    const auto csv = rrc::budget_table_csv(rows);
    CHECK(csv.find("ours,ECDSA-224,122,372,true") != std::string::npos);
    CHECK(csv.find("sota,ECDSA-256,380,372,false") != std::string::npos);
    CHECK(rrc::budget_table_markdown(rows).find("| sota | ECDSA-224 | 364 | yes |") != std::string::npos);
    CHECK(rrc::parse_scheme("sota") == Scheme::kSota);
    CHECK_THROWS_AS(rrc::parse_scheme("x"), Error);
}
