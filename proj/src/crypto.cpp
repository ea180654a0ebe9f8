// The EC_KEY API is the only OpenSSL 3.0 surface that accepts a caller
// supplied (k^-1, r) pair, which deterministic nonces need.
#define OPENSSL_SUPPRESS_DEPRECATED

#include "bsauth/crypto.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/ecdsa.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/obj_mac.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "bsauth/error.hpp"

namespace bsauth::crypto {

namespace {

// ECDSA-224 components are padded to 32 bytes so the signature occupies 64.
constexpr std::array<SuiteInfo, 5> kSuites{{
    {SuiteId::kEcdsa224, "ECDSA-224", "ecdsa-224", "secp224r1", 224, 32, 64, 57},
    {SuiteId::kEcdsa256, "ECDSA-256", "ecdsa-256", "prime256v1", 256, 32, 64, 65},
    {SuiteId::kEcdsa384, "ECDSA-384", "ecdsa-384", "secp384r1", 384, 48, 96, 97},
    {SuiteId::kEcdsa521, "ECDSA-521", "ecdsa-521", "secp521r1", 521, 66, 132, 133},
    {SuiteId::kEcdsa571, "ECDSA-571", "ecdsa-571", "sect571r1", 571, 72, 144, 145},
}};

int curve_nid(SuiteId id) {
    switch (id) {
        case SuiteId::kEcdsa224: return NID_secp224r1;
        case SuiteId::kEcdsa256: return NID_X9_62_prime256v1;
        case SuiteId::kEcdsa384: return NID_secp384r1;
        case SuiteId::kEcdsa521: return NID_secp521r1;
        case SuiteId::kEcdsa571: return NID_sect571r1;
    }
    throw Error(ErrorCode::kUnsupportedSuite, "unsupported suite");
}

const EVP_MD* suite_digest(SuiteId id) {
    switch (id) {
        case SuiteId::kEcdsa224: return EVP_sha224();
        case SuiteId::kEcdsa256: return EVP_sha256();
        case SuiteId::kEcdsa384: return EVP_sha384();
        case SuiteId::kEcdsa521:
        case SuiteId::kEcdsa571: return EVP_sha512();
    }
    throw Error(ErrorCode::kUnsupportedSuite, "unsupported suite");
}

struct BnDeleter {
    void operator()(BIGNUM* p) const { BN_clear_free(p); }
};
struct BnCtxDeleter {
    void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};
struct PointDeleter {
    void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};
struct SigDeleter {
    void operator()(ECDSA_SIG* p) const { ECDSA_SIG_free(p); }
};
using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnCtxDeleter>;
using PointPtr = std::unique_ptr<EC_POINT, PointDeleter>;
using SigPtr = std::unique_ptr<ECDSA_SIG, SigDeleter>;

BnPtr bn_from(ByteView b) {
    BnPtr out(BN_bin2bn(b.data(), static_cast<int>(b.size()), nullptr));
    if (!out) throw Error(ErrorCode::kInvalidKey, "BN_bin2bn failed");
    return out;
}

Bytes bn_to_fixed(const BIGNUM* bn, std::size_t width) {
    Bytes out(width);
    if (BN_bn2binpad(bn, out.data(), static_cast<int>(width)) < 0) {
        throw Error(ErrorCode::kInvalidKey, "integer exceeds fixed width");
    }
    return out;
}

Bytes digest(const EVP_MD* md, ByteView msg) {
    Bytes out(static_cast<std::size_t>(EVP_MD_get_size(md)));
    unsigned int len = 0;
    if (EVP_Digest(msg.data(), msg.size(), out.data(), &len, md, nullptr) != 1) {
        throw Error(ErrorCode::kInvalidArgument, "digest failed");
    }
    out.resize(len);
    return out;
}

Bytes hmac(const EVP_MD* md, ByteView key, ByteView data) {
    Bytes out(EVP_MAX_MD_SIZE);
    unsigned int len = 0;
    if (HMAC(md, key.data(), static_cast<int>(key.size()), data.data(), data.size(), out.data(),
             &len) == nullptr) {
        throw Error(ErrorCode::kInvalidArgument, "HMAC failed");
    }
    out.resize(len);
    return out;
}

Bytes concat(std::initializer_list<ByteView> parts) {
    Bytes out;
    for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

// Leftmost qlen bits of an octet string as an integer (RFC 6979 bits2int).
BnPtr bits_to_int(ByteView b, int qlen) {
    BnPtr v = bn_from(b);
    const int blen = static_cast<int>(b.size()) * 8;
    if (blen > qlen) BN_rshift(v.get(), v.get(), blen - qlen);
    return v;
}

}  // namespace

namespace detail {

struct KeyHandle {
    EC_KEY* key = nullptr;
    ~KeyHandle() { EC_KEY_free(key); }
};

}  // namespace detail

namespace {

std::shared_ptr<detail::KeyHandle> new_handle(SuiteId suite) {
    auto h = std::make_shared<detail::KeyHandle>();
    h->key = EC_KEY_new_by_curve_name(curve_nid(suite));
    if (h->key == nullptr) {
        throw Error(ErrorCode::kSuiteUnavailable,
                    std::string(suite_info(suite).name) + " is unavailable at runtime");
    }
    return h;
}

std::size_t scalar_width(const EC_GROUP* group) {
    return static_cast<std::size_t>((EC_GROUP_order_bits(group) + 7) / 8);
}

}  // namespace

std::span<const SuiteInfo> all_suites() { return kSuites; }

const SuiteInfo& suite_info(SuiteId id) {
    for (const auto& s : kSuites) {
        if (s.id == id) return s;
    }
    throw Error(ErrorCode::kUnsupportedSuite,
                "unsupported suite id " + std::to_string(static_cast<int>(id)));
}

SuiteSizes suite_sizes(SuiteId id) {
    const auto& s = suite_info(id);
    return {s.signature_size, s.public_key_size};
}

SuiteId parse_suite(std::string_view name) {
    std::string lower;
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (const auto& s : kSuites) {
        if (lower == s.slug || lower == std::to_string(s.key_bits)) return s.id;
    }
    throw Error(ErrorCode::kUnsupportedSuite, "unsupported suite '" + std::string(name) + "'");
}

SuiteId suite_from_byte(std::uint8_t b) {
    return suite_info(static_cast<SuiteId>(b)).id;
}

bool suite_available(SuiteId id) {
    EC_GROUP* g = EC_GROUP_new_by_curve_name(curve_nid(id));
    const bool ok = g != nullptr;
    EC_GROUP_free(g);
    return ok;
}

std::string suite_table_csv() {
    std::string out = "suite_id,key_bits,signature_size,public_key_size\n";
    for (const auto& s : kSuites) {
        out += std::string(s.name) + "," + std::to_string(s.key_bits) + "," +
               std::to_string(s.signature_size) + "," + std::to_string(s.public_key_size) + "\n";
    }
    return out;
}

Signature Signature::from_bytes(SuiteId suite, ByteView bytes) {
    const auto& info = suite_info(suite);
    if (bytes.size() != info.signature_size) {
        throw Error(ErrorCode::kParse, std::string(info.name) + " signature must be " +
                                           std::to_string(info.signature_size) + " bytes, got " +
                                           std::to_string(bytes.size()));
    }
    return {suite, Bytes(bytes.begin(), bytes.end())};
}

PublicKey PublicKey::from_bytes(SuiteId suite, ByteView encoded) {
    const auto& info = suite_info(suite);
    if (encoded.size() != info.public_key_size || encoded.empty() || encoded[0] != 0x04) {
        throw Error(ErrorCode::kInvalidKey,
                    std::string(info.name) + " public key must be an uncompressed " +
                        std::to_string(info.public_key_size) + "-byte point");
    }
    auto h = new_handle(suite);
    const EC_GROUP* group = EC_KEY_get0_group(h->key);
    PointPtr point(EC_POINT_new(group));
    if (!point ||
        EC_POINT_oct2point(group, point.get(), encoded.data(), encoded.size(), nullptr) != 1 ||
        EC_POINT_is_at_infinity(group, point.get()) ||
        EC_KEY_set_public_key(h->key, point.get()) != 1) {
        throw Error(ErrorCode::kInvalidKey, "public key is not a valid curve point");
    }
    PublicKey out;
    out.suite_ = suite;
    out.encoded_.assign(encoded.begin(), encoded.end());
    out.handle_ = std::move(h);
    return out;
}

PrivateKey PrivateKey::from_bytes(SuiteId suite, ByteView scalar) {
    auto h = new_handle(suite);
    const EC_GROUP* group = EC_KEY_get0_group(h->key);
    if (scalar.size() != scalar_width(group)) {
        throw Error(ErrorCode::kInvalidKey, "private scalar has wrong width for suite");
    }
    BnPtr d = bn_from(scalar);
    if (BN_is_zero(d.get()) || BN_cmp(d.get(), EC_GROUP_get0_order(group)) >= 0) {
        throw Error(ErrorCode::kInvalidKey, "private scalar out of range");
    }
    PointPtr pub(EC_POINT_new(group));
    if (!pub || EC_POINT_mul(group, pub.get(), d.get(), nullptr, nullptr, nullptr) != 1 ||
        EC_KEY_set_private_key(h->key, d.get()) != 1 ||
        EC_KEY_set_public_key(h->key, pub.get()) != 1) {
        throw Error(ErrorCode::kInvalidKey, "failed to derive public key");
    }
    Bytes encoded(suite_info(suite).public_key_size);
    if (EC_POINT_point2oct(group, pub.get(), POINT_CONVERSION_UNCOMPRESSED, encoded.data(),
                           encoded.size(), nullptr) != encoded.size()) {
        throw Error(ErrorCode::kInvalidKey, "unexpected public key encoding size");
    }

    PrivateKey out;
    out.suite_ = suite;
    out.scalar_.assign(scalar.begin(), scalar.end());
    out.public_ = PublicKey::from_bytes(suite, encoded);
    out.handle_ = std::move(h);
    return out;
}

KeyPair generate_keypair(SuiteId suite, std::optional<std::uint64_t> seed) {
    auto h = new_handle(suite);
    const EC_GROUP* group = EC_KEY_get0_group(h->key);
    const std::size_t width = scalar_width(group);

    if (!seed) {
        if (EC_KEY_generate_key(h->key) != 1) {
            throw Error(ErrorCode::kInvalidKey, "key generation failed");
        }
        auto priv = PrivateKey::from_bytes(
            suite, bn_to_fixed(EC_KEY_get0_private_key(h->key), width));
        return {priv.public_key(), priv};
    }

    // Seeded mode: HMAC-SHA512 expansion with rejection sampling into [1, n).
    const BIGNUM* order = EC_GROUP_get0_order(group);
    const int qlen = EC_GROUP_order_bits(group);
    static constexpr std::string_view kLabel = "bsauth/keygen/v1";
    for (std::uint32_t counter = 0;; ++counter) {
        Bytes stream;
        for (std::uint32_t block = 0; stream.size() < width; ++block) {
            ByteWriter w;
            w.u8(static_cast<std::uint8_t>(suite));
            w.u64(*seed);
            w.u32(counter);
            w.u32(block);
            auto chunk = hmac(EVP_sha512(), as_bytes(kLabel), w.bytes());
            stream.insert(stream.end(), chunk.begin(), chunk.end());
        }
        stream.resize(width);
        BnPtr d = bits_to_int(stream, qlen);
        if (!BN_is_zero(d.get()) && BN_cmp(d.get(), order) < 0) {
            auto priv = PrivateKey::from_bytes(suite, bn_to_fixed(d.get(), width));
            return {priv.public_key(), priv};
        }
    }
}

Signature sign(const PrivateKey& key, ByteView message) {
    if (!key.handle_) throw Error(ErrorCode::kInvalidKey, "empty private key");
    const auto& info = suite_info(key.suite());
    const EVP_MD* md = suite_digest(key.suite());
    EC_KEY* ec = key.handle_->key;
    const EC_GROUP* group = EC_KEY_get0_group(ec);
    const BIGNUM* order = EC_GROUP_get0_order(group);
    const int qlen = EC_GROUP_order_bits(group);
    const std::size_t rlen = scalar_width(group);
    BnCtxPtr ctx(BN_CTX_new());

    const Bytes h1 = digest(md, message);

    // RFC 6979 section 3.2.
    BnPtr z = bits_to_int(h1, qlen);
    if (BN_cmp(z.get(), order) >= 0) BN_sub(z.get(), z.get(), order);
    const Bytes x_octets = bn_to_fixed(EC_KEY_get0_private_key(ec), rlen);
    const Bytes h_octets = bn_to_fixed(z.get(), rlen);

    const std::size_t hlen = h1.size();
    Bytes v(hlen, 0x01);
    Bytes k(hlen, 0x00);
    const std::array<std::uint8_t, 1> zero{0x00};
    const std::array<std::uint8_t, 1> one{0x01};
    k = hmac(md, k, concat({v, zero, x_octets, h_octets}));
    v = hmac(md, k, v);
    k = hmac(md, k, concat({v, one, x_octets, h_octets}));
    v = hmac(md, k, v);

    for (;;) {
        Bytes t;
        while (t.size() * 8 < static_cast<std::size_t>(qlen)) {
            v = hmac(md, k, v);
            t.insert(t.end(), v.begin(), v.end());
        }
        BnPtr nonce = bits_to_int(t, qlen);
        if (!BN_is_zero(nonce.get()) && BN_cmp(nonce.get(), order) < 0) {
            PointPtr kg(EC_POINT_new(group));
            BnPtr x(BN_new());
            BnPtr r(BN_new());
            BnPtr kinv(BN_new());
            if (!kg || EC_POINT_mul(group, kg.get(), nonce.get(), nullptr, nullptr, ctx.get()) != 1 ||
                EC_POINT_get_affine_coordinates(group, kg.get(), x.get(), nullptr, ctx.get()) != 1 ||
                BN_nnmod(r.get(), x.get(), order, ctx.get()) != 1 ||
                BN_mod_inverse(kinv.get(), nonce.get(), order, ctx.get()) == nullptr) {
                throw Error(ErrorCode::kInvalidKey, "nonce arithmetic failed");
            }
            if (!BN_is_zero(r.get())) {
                SigPtr sig(ECDSA_do_sign_ex(h1.data(), static_cast<int>(h1.size()), kinv.get(),
                                            r.get(), ec));
                if (sig) {
                    const BIGNUM* sr = nullptr;
                    const BIGNUM* ss = nullptr;
                    ECDSA_SIG_get0(sig.get(), &sr, &ss);
                    Bytes out = bn_to_fixed(sr, info.component_size);
                    Bytes s_part = bn_to_fixed(ss, info.component_size);
                    out.insert(out.end(), s_part.begin(), s_part.end());
                    return {key.suite(), std::move(out)};
                }
            }
        }
        k = hmac(md, k, concat({v, zero}));
        v = hmac(md, k, v);
    }
}

bool verify(const PublicKey& key, ByteView message, const Signature& sig) {
    if (key.suite() != sig.suite) {
        throw Error(ErrorCode::kSuiteMismatch,
                    std::string("key suite ") + suite_info(key.suite()).name +
                        " does not match signature suite " + suite_info(sig.suite).name);
    }
    const auto& info = suite_info(sig.suite);
    if (!key.handle_ || sig.bytes.size() != info.signature_size) return false;

    const ByteView raw(sig.bytes);
    BnPtr r = bn_from(raw.first(info.component_size));
    BnPtr s = bn_from(raw.subspan(info.component_size));
    SigPtr es(ECDSA_SIG_new());
    if (!es || ECDSA_SIG_set0(es.get(), r.get(), s.get()) != 1) return false;
    r.release();
    s.release();

    const Bytes h = digest(suite_digest(sig.suite), message);
    return ECDSA_do_verify(h.data(), static_cast<int>(h.size()), es.get(), key.handle_->key) == 1;
}

Digest sha256(ByteView data) {
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::kInvalidArgument, "sha256 failed");
    }
    return out;
}

}  // namespace bsauth::crypto
