#include <doctest.h>

#include <string>

#include "bsauth/bytes.hpp"
#include "bsauth/crypto.hpp"
#include "bsauth/error.hpp"

using namespace bsauth;
using crypto::SuiteId;

namespace {

Bytes pad(std::string hex, std::size_t width) {
    if (hex.size() % 2) hex.insert(0, "0");
    Bytes b = from_hex(hex);
    Bytes out(width - b.size(), 0);
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

struct Vector {
    SuiteId suite;
    const char* x;
    const char* r;
    const char* s;
};

// Deterministic ECDSA over "sample", cross-checked with an independent
// implementation (pyca/cryptography deterministic signing).
const Vector kVectors[] = {
    {SuiteId::kEcdsa224, "F220266E1105BFE3083E03EC7A3A654651F45E37167E88600BF257C1",
     "1cdfe6662dde1e4a1ec4cdedf6a1f5a2fb7fbd9145c12113e6abfd3e",
     "a6694fd7718a21053f225d3f46197ca699d45006c06f871808f43ebc"},
    {SuiteId::kEcdsa256, "C9AFA9D845BA75166B5C215767B1D6934E50C3DB36E89B127B8A622B120F6721",
     "efd48b2aacb6a8fd1140dd9cd45e81d69d2c877b56aaf991c34d0ea84eaf3716",
     "f7cb1c942d657c41d436c7a1b6e29f65f3e900dbb9aff4064dc4ab2f843acda8"},
    {SuiteId::kEcdsa384, "d903",
     "8d63232484be74dca73579f66bba851986016c50f3ff3a8aefc323ddb790fe458efe099e365189c473c447c55f9adf38",
     "ae3647ecba3cfdc2c16903f0ea5b7fdbe190c74e4551242e7c85cbeb0e8d3ac2ba1e39693c0d9f235bf582b12f79bf67"},
    {SuiteId::kEcdsa521, "3ade68b1",
     "2ef128a95dd3a6416d325c026dc6b05501128d2ca247da1134a62ed7b67835463d442c6ebc8fa54afe8c1926be51eb80da3aa562ae3d9d5daece1f44f626f46214",
     "14d20dee646b812aaadd0941c309e3317869f1d730b2de6e425bbd8d702c1096603fd05cdcb345479b9b306a62102da591ebffc8345d2e000ed6fc7cc685efc64c0"},
};

std::size_t scalar_width(SuiteId s) {
    switch (s) {
        case SuiteId::kEcdsa224: return 28;
        case SuiteId::kEcdsa256: return 32;
        case SuiteId::kEcdsa384: return 48;
        case SuiteId::kEcdsa521: return 66;
        case SuiteId::kEcdsa571: return 72;
    }
    return 0;
}

}  // namespace

TEST_CASE("suite table sizes") {
    const auto& a = crypto::suite_info(SuiteId::kEcdsa224);
    CHECK(a.signature_size == 64);
    CHECK(a.public_key_size == 57);
    CHECK(crypto::suite_info(SuiteId::kEcdsa256).signature_size == 64);
    CHECK(crypto::suite_info(SuiteId::kEcdsa256).public_key_size == 65);
    CHECK(crypto::suite_info(SuiteId::kEcdsa384).signature_size == 96);
    CHECK(crypto::suite_info(SuiteId::kEcdsa384).public_key_size == 97);
    CHECK(crypto::suite_info(SuiteId::kEcdsa521).signature_size == 132);
    CHECK(crypto::suite_info(SuiteId::kEcdsa521).public_key_size == 133);
    CHECK(crypto::suite_info(SuiteId::kEcdsa571).signature_size == 144);
    CHECK(crypto::suite_info(SuiteId::kEcdsa571).public_key_size == 145);
    CHECK(crypto::all_suites().size() == 5);
}

TEST_CASE("suite names parse") {
    CHECK(crypto::parse_suite("ecdsa-224") == SuiteId::kEcdsa224);
    CHECK(crypto::parse_suite("ECDSA-571") == SuiteId::kEcdsa571);
    CHECK(crypto::parse_suite("384") == SuiteId::kEcdsa384);
    CHECK_THROWS_AS(crypto::parse_suite("rsa-2048"), Error);
    CHECK_THROWS_AS(crypto::suite_from_byte(0), Error);
    CHECK_THROWS_AS(crypto::suite_from_byte(6), Error);
}

TEST_CASE("deterministic signatures match independent vectors") {
    const Bytes msg = {'s', 'a', 'm', 'p', 'l', 'e'};
    for (const auto& v : kVectors) {
        const std::string name = crypto::suite_info(v.suite).name;
        CAPTURE(name);
        const auto& info = crypto::suite_info(v.suite);
        const auto key = crypto::PrivateKey::from_bytes(v.suite, pad(v.x, scalar_width(v.suite)));
        const auto sig = crypto::sign(key, msg);
        Bytes expected = pad(v.r, info.component_size);
        const Bytes s = pad(v.s, info.component_size);
        expected.insert(expected.end(), s.begin(), s.end());
        CHECK(to_hex(sig.bytes) == to_hex(expected));
        CHECK(crypto::verify(key.public_key(), msg, sig));
    }
}

TEST_CASE("P-256 public key derivation") {
    const auto key = crypto::PrivateKey::from_bytes(
        SuiteId::kEcdsa256,
        from_hex("C9AFA9D845BA75166B5C215767B1D6934E50C3DB36E89B127B8A622B120F6721"));
    CHECK(to_hex(key.public_key().bytes()) ==
          "0460fed4ba255a9d31c961eb74c6356d68c049b8923b61fa6ce669622e60f29fb6"
          "7903fe1008b8bc99a41ae9e95628bc64f2f1b20c2d7e9f5177a3c294d4462299");
}

TEST_CASE("sha256 known answer") {
    const Bytes abc = {'a', 'b', 'c'};
    CHECK(to_hex(crypto::sha256(abc)) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("sign and verify round trip on every suite") {
    const Bytes msg = {1, 2, 3, 4, 5};
    for (const auto& info : crypto::all_suites()) {
        const std::string name = info.name;
        CAPTURE(name);
        if (!crypto::suite_available(info.id)) continue;
        const auto kp = crypto::generate_keypair(info.id, 99);
        CHECK(kp.public_key.bytes().size() == info.public_key_size);
        const auto sig = crypto::sign(kp.private_key, msg);
        CHECK(sig.bytes.size() == info.signature_size);
        CHECK(crypto::verify(kp.public_key, msg, sig));

        Bytes tampered = msg;
        tampered[2] ^= 0x80;
        CHECK_FALSE(crypto::verify(kp.public_key, tampered, sig));
        auto bad = sig;
        bad.bytes.back() ^= 0x01;
        CHECK_FALSE(crypto::verify(kp.public_key, msg, bad));
    }
}

TEST_CASE("seeded keys are reproducible and distinct per seed") {
    const auto a = crypto::generate_keypair(SuiteId::kEcdsa224, 7);
    const auto b = crypto::generate_keypair(SuiteId::kEcdsa224, 7);
    const auto c = crypto::generate_keypair(SuiteId::kEcdsa224, 8);
    CHECK(a.private_key.bytes() == b.private_key.bytes());
    CHECK(a.public_key == b.public_key);
    CHECK_FALSE(a.public_key == c.public_key);
    const auto u1 = crypto::generate_keypair(SuiteId::kEcdsa224);
    const auto u2 = crypto::generate_keypair(SuiteId::kEcdsa224);
    CHECK_FALSE(u1.public_key == u2.public_key);
}

TEST_CASE("suite mismatch and malformed keys") {
    const Bytes msg = {9};
    const auto k224 = crypto::generate_keypair(SuiteId::kEcdsa224, 1);
    const auto k256 = crypto::generate_keypair(SuiteId::kEcdsa256, 1);
    const auto sig = crypto::sign(k224.private_key, msg);
    CHECK_THROWS_AS(crypto::verify(k256.public_key, msg, sig), Error);
    try {
        crypto::verify(k256.public_key, msg, sig);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kSuiteMismatch);
    }

    Bytes off_curve = k224.public_key.bytes();
    off_curve.back() ^= 0x01;
    CHECK_THROWS_AS(crypto::PublicKey::from_bytes(SuiteId::kEcdsa224, off_curve), Error);
    CHECK_THROWS_AS(crypto::PublicKey::from_bytes(SuiteId::kEcdsa224, Bytes(10, 4)), Error);
    CHECK_THROWS_AS(crypto::Signature::from_bytes(SuiteId::kEcdsa224, Bytes(63)), Error);
    CHECK_THROWS_AS(crypto::PrivateKey::from_bytes(SuiteId::kEcdsa256, Bytes(32, 0)), Error);
}

TEST_CASE("hex helpers") {
    CHECK(to_hex(Bytes{0x00, 0xab, 0xff}) == "00abff");
    CHECK(from_hex("00ABff") == Bytes{0x00, 0xab, 0xff});
    CHECK_THROWS_AS(from_hex("abc"), Error);
    CHECK_THROWS_AS(from_hex("zz"), Error);
}

TEST_CASE("byte reader rejects overruns") {
    ByteWriter w;
    w.u32(7);
    w.blob(Bytes{1, 2, 3});
    const Bytes data = std::move(w).take();
    ByteReader r(data);
    CHECK(r.u32() == 7);
    const auto blob = r.blob();
    CHECK(Bytes(blob.begin(), blob.end()) == Bytes{1, 2, 3});
    CHECK(r.done());
    CHECK_THROWS_AS(r.u8(), Error);

    Bytes truncated(data.begin(), data.end() - 1);
    ByteReader t(truncated);
    t.u32();
    CHECK_THROWS_AS(t.blob(), Error);
}
