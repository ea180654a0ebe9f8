#include "bsauth/rrc.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "bsauth/error.hpp"

namespace bsauth::rrc {

namespace {

void put_cell_identity(ByteWriter& w, CellId id) {
    for (int i = static_cast<int>(kCellIdentityBytes) - 1; i >= 0; --i) {
        w.u8(static_cast<std::uint8_t>(id.value >> (8 * i)));
    }
}

std::size_t ours_overhead(crypto::SuiteId suite) {
    return kFreshnessBytes + crypto::suite_sizes(suite).signature_size;
}

std::size_t sota_overhead(crypto::SuiteId suite) {
    const auto sz = crypto::suite_sizes(suite);
    return kFreshnessBytes + 2 * sz.public_key_size + 3 * sz.signature_size;
}

constexpr std::string_view kIntermediaryTag = "SOTA/AMF";
constexpr std::string_view kBsTag = "SOTA/BS";

}  // namespace

const char* to_string(Scheme s) { return s == Scheme::kOurs ? "ours" : "sota"; }

Scheme parse_scheme(const std::string& s) {
    if (s == "ours") return Scheme::kOurs;
    if (s == "sota") return Scheme::kSota;
    throw Error(ErrorCode::kInvalidArgument, "unknown scheme '" + s + "' (expected ours|sota)");
}

Sib1Payload Sib1Payload::make(CellId cell_id, ByteView parameters) {
    if (!cell_id.valid()) throw Error(ErrorCode::kInvalidArgument, "cell id exceeds 36 bits");
    ByteWriter w;
    put_cell_identity(w, cell_id);
    w.raw(parameters);
    Sib1Payload p;
    p.cell_id_ = cell_id;
    p.base_fields_ = std::move(w).take();
    return p;
}

Sib1Payload Sib1Payload::synthetic(CellId cell_id, std::size_t base_size, std::uint64_t seed) {
    if (base_size < kCellIdentityBytes) {
        throw Error(ErrorCode::kInvalidArgument,
                    "SIB1 base size must cover the 5-byte cell identity");
    }
    std::mt19937_64 rng(seed ^ cell_id.value);
    Bytes params(base_size - kCellIdentityBytes);
    for (auto& b : params) b = static_cast<std::uint8_t>(rng());
    return make(cell_id, params);
}

Sib1Payload Sib1Payload::from_bytes(ByteView base_fields) {
    if (base_fields.size() < kCellIdentityBytes) {
        throw Error(ErrorCode::kParse, "SIB1 body shorter than the cell identity");
    }
    std::uint64_t id = 0;
    for (std::size_t i = 0; i < kCellIdentityBytes; ++i) id = (id << 8) | base_fields[i];
    Sib1Payload p;
    p.cell_id_ = CellId{id};
    if (!p.cell_id_.valid()) throw Error(ErrorCode::kParse, "SIB1 cell identity exceeds 36 bits");
    p.base_fields_.assign(base_fields.begin(), base_fields.end());
    return p;
}

std::size_t SignedSib1::wire_size() const {
    return payload.base_size() + kFreshnessBytes + signature.bytes.size();
}

Bytes signing_bytes(const Sib1Payload& payload, std::uint32_t nonce, std::uint32_t timestamp) {
    ByteWriter w;
    w.raw(payload.base_fields());
    w.u32(nonce);
    w.u32(timestamp);
    return std::move(w).take();
}

SignedSib1 sign_sib1(const crypto::PrivateKey& bs_key, const Sib1Payload& payload,
                     std::uint32_t nonce, std::uint32_t timestamp) {
    SignedSib1 f;
    f.payload = payload;
    f.nonce = nonce;
    f.timestamp = timestamp;
    f.signature = crypto::sign(bs_key, signing_bytes(payload, nonce, timestamp));
    return f;
}

bool verify_sib1(const crypto::PublicKey& bs_key, const SignedSib1& frame) {
    if (bs_key.suite() != frame.signature.suite) return false;
    return crypto::verify(bs_key, signing_bytes(frame.payload, frame.nonce, frame.timestamp),
                          frame.signature);
}

Bytes encode(const SignedSib1& frame) {
    Bytes out = signing_bytes(frame.payload, frame.nonce, frame.timestamp);
    out.insert(out.end(), frame.signature.bytes.begin(), frame.signature.bytes.end());
    return out;
}

SignedSib1 decode_signed_sib1(ByteView wire, crypto::SuiteId suite) {
    const std::size_t sig = crypto::suite_sizes(suite).signature_size;
    if (wire.size() < kCellIdentityBytes + kFreshnessBytes + sig) {
        throw Error(ErrorCode::kParse, "SIB1 frame too short for suite");
    }
    const std::size_t base = wire.size() - kFreshnessBytes - sig;
    ByteReader in(wire);
    SignedSib1 f;
    f.payload = Sib1Payload::from_bytes(in.raw(base));
    f.nonce = in.u32();
    f.timestamp = in.u32();
    f.signature = crypto::Signature::from_bytes(suite, in.raw(sig));
    return f;
}

Bytes intermediary_credential_bytes(const crypto::PublicKey& intermediary) {
    ByteWriter w;
    w.raw(as_bytes(kIntermediaryTag));
    w.u8(static_cast<std::uint8_t>(intermediary.suite()));
    w.raw(intermediary.bytes());
    return std::move(w).take();
}

Bytes bs_credential_bytes(CellId cell_id, const crypto::PublicKey& bs_key) {
    ByteWriter w;
    w.raw(as_bytes(kBsTag));
    w.u64(cell_id.value);
    w.u8(static_cast<std::uint8_t>(bs_key.suite()));
    w.raw(bs_key.bytes());
    return std::move(w).take();
}

SotaCredentials issue_sota_credentials(const crypto::PrivateKey& core,
                                       const crypto::PrivateKey& intermediary,
                                       const crypto::PublicKey& bs_key, CellId cell_id) {
    SotaCredentials c{intermediary.public_key(), bs_key, cell_id, {}, {}};
    c.core_over_intermediary = crypto::sign(core, intermediary_credential_bytes(c.intermediary_public_key));
    c.intermediary_over_bs = crypto::sign(intermediary, bs_credential_bytes(cell_id, bs_key));
    return c;
}

std::size_t SotaSib1::wire_size() const {
    std::size_t n = payload.base_size() + kFreshnessBytes + bs_public_key.bytes().size() +
                    intermediary_public_key.bytes().size();
    for (const auto& s : chain_signatures) n += s.bytes.size();
    return n;
}

SotaSib1 sign_sota_sib1(const crypto::PrivateKey& bs_key, const SotaCredentials& creds,
                        const Sib1Payload& payload, std::uint32_t nonce, std::uint32_t timestamp) {
    SotaSib1 f;
    f.payload = payload;
    f.nonce = nonce;
    f.timestamp = timestamp;
    f.bs_public_key = creds.bs_public_key;
    f.intermediary_public_key = creds.intermediary_public_key;
    f.chain_signatures = {creds.core_over_intermediary, creds.intermediary_over_bs,
                          crypto::sign(bs_key, signing_bytes(payload, nonce, timestamp))};
    return f;
}

Bytes encode(const SotaSib1& frame) {
    Bytes out = signing_bytes(frame.payload, frame.nonce, frame.timestamp);
    auto append = [&](const Bytes& b) { out.insert(out.end(), b.begin(), b.end()); };
    append(frame.bs_public_key.bytes());
    append(frame.intermediary_public_key.bytes());
    for (const auto& s : frame.chain_signatures) append(s.bytes);
    return out;
}

SotaSib1 decode_sota_sib1(ByteView wire, crypto::SuiteId suite) {
    const auto sz = crypto::suite_sizes(suite);
    const std::size_t tail = kFreshnessBytes + 2 * sz.public_key_size + 3 * sz.signature_size;
    if (wire.size() < kCellIdentityBytes + tail) {
        throw Error(ErrorCode::kParse, "chain SIB1 frame too short for suite");
    }
    ByteReader in(wire);
    SotaSib1 f;
    f.payload = Sib1Payload::from_bytes(in.raw(wire.size() - tail));
    f.nonce = in.u32();
    f.timestamp = in.u32();
    f.bs_public_key = crypto::PublicKey::from_bytes(suite, in.raw(sz.public_key_size));
    f.intermediary_public_key = crypto::PublicKey::from_bytes(suite, in.raw(sz.public_key_size));
    for (auto& s : f.chain_signatures) {
        s = crypto::Signature::from_bytes(suite, in.raw(sz.signature_size));
    }
    return f;
}

std::size_t encoded_size(Scheme scheme, crypto::SuiteId suite, std::size_t base_size) {
    return base_size + (scheme == Scheme::kOurs ? ours_overhead(suite) : sota_overhead(suite));
}

std::vector<BudgetRow> budget_table(std::size_t base_size) {
    std::vector<BudgetRow> rows;
    for (Scheme scheme : {Scheme::kOurs, Scheme::kSota}) {
        for (const auto& s : crypto::all_suites()) {
            const auto size = encoded_size(scheme, s.id, base_size);
            rows.push_back({scheme, s.id, size, check_budget(size)});
        }
    }
    return rows;
}

std::string budget_table_csv(const std::vector<BudgetRow>& rows) {
    std::ostringstream out;
    out << "scheme,suite,size,limit,fits\n";
    for (const auto& r : rows) {
        out << to_string(r.scheme) << ',' << crypto::suite_info(r.suite).name << ',' << r.size
            << ',' << kSib1Limit << ',' << (r.fits ? "true" : "false") << '\n';
    }
    return out.str();
}

std::string budget_table_markdown(const std::vector<BudgetRow>& rows) {
    std::ostringstream out;
    out << "| scheme | suite | size (B) | fits " << kSib1Limit << " B |\n";
    out << "|---|---|---:|---|\n";
    for (const auto& r : rows) {
        out << "| " << to_string(r.scheme) << " | " << crypto::suite_info(r.suite).name << " | "
            << r.size << " | " << (r.fits ? "yes" : "no") << " |\n";
    }
    return out.str();
}

BaseSizeWindow base_size_window() {
    std::size_t lo = kCellIdentityBytes;
    std::size_t hi = kSib1Limit - sota_overhead(crypto::SuiteId::kEcdsa224);
    for (const auto& s : crypto::all_suites()) {
        hi = std::min(hi, kSib1Limit - ours_overhead(s.id));
        if (s.id != crypto::SuiteId::kEcdsa224) {
            const auto over = sota_overhead(s.id);
            if (over <= kSib1Limit) lo = std::max(lo, kSib1Limit + 1 - over);
        }
    }
    return {lo, hi};
}

}  // namespace bsauth::rrc
