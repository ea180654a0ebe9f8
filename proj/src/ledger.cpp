#include "bsauth/ledger.hpp"

#include <fstream>
#include <iterator>

#include "bsauth/error.hpp"

namespace bsauth {

namespace {

constexpr std::uint32_t kBlockMagic = 0x424c4b31;  // "BLK1"
constexpr std::array<std::uint8_t, 4> kFileMagic{'B', 'S', 'L', '1'};

void write_header(ByteWriter& w, const Block& b) {
    w.u32(kBlockMagic);
    w.u64(b.height);
    w.raw(b.prev_hash);
    w.i64(b.timestamp);
    w.u8(b.difficulty);
    w.blob(encode_certificate(b.payload));
}

crypto::Signature sign_block(const Block& b, const crypto::PrivateKey& writer) {
    return crypto::sign(writer, block_signing_bytes(b));
}

bool writer_signature_ok(const Block& b, const crypto::PublicKey& core) {
    if (b.writer_signature.suite != core.suite()) return false;
    return crypto::verify(core, block_signing_bytes(b), b.writer_signature);
}

std::shared_ptr<const std::map<CellId, std::size_t>> build_index(const std::vector<Block>& blocks) {
    auto index = std::make_shared<std::map<CellId, std::size_t>>();
    for (std::size_t h = 1; h < blocks.size(); ++h) {
        (*index)[blocks[h].payload.body.subject_cell_id] = h;
    }
    return index;
}

}  // namespace

Bytes block_signing_bytes(const Block& b) {
    ByteWriter w;
    write_header(w, b);
    return std::move(w).take();
}

Bytes block_hash_input(const Block& b) {
    ByteWriter w;
    write_header(w, b);
    w.u8(static_cast<std::uint8_t>(b.writer_signature.suite));
    w.raw(b.writer_signature.bytes);
    return std::move(w).take();
}

Digest compute_block_hash(const Block& b) { return crypto::sha256(block_hash_input(b)); }

Bytes encode_block(const Block& b) {
    Bytes out = block_hash_input(b);
    out.insert(out.end(), b.block_hash.begin(), b.block_hash.end());
    return out;
}

Block decode_block(ByteView bytes) {
    ByteReader in(bytes);
    if (in.u32() != kBlockMagic) throw Error(ErrorCode::kParse, "block magic mismatch");
    Block b;
    b.height = in.u64();
    b.prev_hash = in.fixed<32>();
    b.timestamp = in.i64();
    b.difficulty = in.u8();
    b.payload = decode_certificate(in.blob());
    const auto suite = crypto::suite_from_byte(in.u8());
    b.writer_signature =
        crypto::Signature::from_bytes(suite, in.raw(crypto::suite_info(suite).signature_size));
    b.block_hash = in.fixed<32>();
    in.expect_done("block");
    return b;
}

bool meets_difficulty(const Digest& hash, std::uint8_t difficulty) {
    unsigned zeros = 0;
    for (auto byte : hash) {
        if (byte == 0) {
            zeros += 8;
            continue;
        }
        for (int bit = 7; bit >= 0 && !(byte & (1u << bit)); --bit) ++zeros;
        break;
    }
    return zeros >= difficulty;
}

Ledger Ledger::create_genesis(const crypto::KeyPair& core,
                              const BaseStationCertificate& core_self_certificate,
                              std::int64_t timestamp, LedgerPolicy policy) {
    if (!(core_self_certificate.body.subject_public_key == core.public_key)) {
        throw Error(ErrorCode::kInvalidCertificate,
                    "genesis record does not carry the core network key");
    }
    if (!verify_certificate_signature(core.public_key, core_self_certificate)) {
        throw Error(ErrorCode::kInvalidCertificate,
                    "genesis record is not self-signed by the core network key");
    }
    Block g;
    g.height = 0;
    g.timestamp = timestamp;
    g.payload = core_self_certificate;
    g.writer_signature = sign_block(g, core.private_key);
    g.block_hash = compute_block_hash(g);

    auto blocks = std::make_shared<std::vector<Block>>();
    blocks->push_back(std::move(g));
    return Ledger(std::move(blocks), std::make_shared<std::map<CellId, std::size_t>>(), policy);
}

Ledger Ledger::from_blocks(std::vector<Block> blocks, LedgerPolicy policy) {
    auto index = build_index(blocks);
    return Ledger(std::make_shared<const std::vector<Block>>(std::move(blocks)), std::move(index),
                  policy);
}

Ledger Ledger::append(const BaseStationCertificate& cert, const crypto::PrivateKey& writer,
                      std::int64_t timestamp) const {
    return append_all(std::span(&cert, 1), writer, timestamp);
}

Ledger Ledger::append_all(std::span<const BaseStationCertificate> certs,
                          const crypto::PrivateKey& writer, std::int64_t timestamp) const {
    if (empty()) throw Error(ErrorCode::kInvalidArgument, "ledger has no genesis block");
    const auto& core = core_public_key();
    if (!(writer.public_key() == core)) {
        throw Error(ErrorCode::kUnauthorizedWriter,
                    "writer key is not the core network key published in genesis");
    }

    auto blocks = std::make_shared<std::vector<Block>>(*blocks_);
    auto index = std::make_shared<std::map<CellId, std::size_t>>(*index_);
    blocks->reserve(blocks->size() + certs.size());
    for (const auto& cert : certs) {
        if (!verify_certificate_signature(core, cert)) {
            throw Error(ErrorCode::kInvalidCertificate,
                        "certificate for cell " + to_string(cert.body.subject_cell_id) +
                            " is not signed by the core network");
        }
        if (!policy_.allow_reissue && index->contains(cert.body.subject_cell_id)) {
            throw Error(ErrorCode::kDuplicateCellId,
                        "cell " + to_string(cert.body.subject_cell_id) + " is already registered");
        }
        Block b;
        b.height = blocks->size();
        b.prev_hash = blocks->back().block_hash;
        b.timestamp = timestamp;
        b.payload = cert;
        b.writer_signature = sign_block(b, writer);
        b.block_hash = compute_block_hash(b);
        (*index)[cert.body.subject_cell_id] = blocks->size();
        blocks->push_back(std::move(b));
    }
    return Ledger(std::move(blocks), std::move(index), policy_);
}

ChainVerdict Ledger::verify_chain(const crypto::PublicKey& core) const {
    auto fail = [](std::uint64_t h, std::string why) {
        return ChainVerdict{false, h, std::move(why)};
    };
    if (empty()) return {false, std::nullopt, "ledger is empty"};

    const auto& chain = *blocks_;
    for (std::size_t h = 0; h < chain.size(); ++h) {
        const Block& b = chain[h];
        if (b.height != h) return fail(h, "height field does not match position");
        const Digest expected_prev = h == 0 ? Digest{} : chain[h - 1].block_hash;
        if (b.prev_hash != expected_prev) return fail(h, "prev_hash does not link to parent");
        if (compute_block_hash(b) != b.block_hash) return fail(h, "block hash mismatch");
        if (!meets_difficulty(b.block_hash, b.difficulty)) return fail(h, "difficulty not met");
        if (!writer_signature_ok(b, core)) return fail(h, "writer signature invalid");
        if (!verify_certificate_signature(core, b.payload)) {
            return fail(h, "payload certificate not signed by core network");
        }
        if (h == 0 && !(b.payload.body.subject_public_key == core)) {
            return fail(h, "genesis does not publish the core network key");
        }
    }
    return {true, std::nullopt, {}};
}

std::optional<BaseStationCertificate> Ledger::lookup(CellId id) const {
    if (!index_) return std::nullopt;
    auto it = index_->find(id);
    if (it == index_->end()) return std::nullopt;
    return (*blocks_)[it->second].payload;
}

std::span<const Block> Ledger::blocks() const {
    if (!blocks_) return {};
    return *blocks_;
}

const Block& Ledger::block(std::size_t height) const {
    if (height >= this->height()) {
        throw Error(ErrorCode::kInvalidArgument, "block height out of range");
    }
    return (*blocks_)[height];
}

const crypto::PublicKey& Ledger::core_public_key() const {
    if (empty()) throw Error(ErrorCode::kInvalidArgument, "ledger has no genesis block");
    return blocks_->front().payload.body.subject_public_key;
}

BlockSizeStats Ledger::measured_block_sizes() const {
    BlockSizeStats s;
    if (empty()) return s;
    s.min = SIZE_MAX;
    for (const auto& b : *blocks_) {
        const auto n = encode_block(b).size();
        s.min = std::min(s.min, n);
        s.max = std::max(s.max, n);
        s.total += n;
    }
    s.mean = static_cast<double>(s.total) / static_cast<double>(height());
    return s;
}

Bytes export_ledger(const Ledger& ledger) {
    ByteWriter w;
    w.raw(kFileMagic);
    for (const auto& b : ledger.blocks()) w.blob(encode_block(b));
    return std::move(w).take();
}

Ledger import_ledger(ByteView file, const std::optional<crypto::PublicKey>& anchor,
                     LedgerPolicy policy) {
    ByteReader in(file);
    auto magic = in.fixed<4>();
    if (magic != kFileMagic) throw Error(ErrorCode::kParse, "not a ledger file (magic mismatch)");
    std::vector<Block> blocks;
    while (!in.done()) {
        const auto h = blocks.size();
        try {
            blocks.push_back(decode_block(in.blob()));
        } catch (const Error& e) {
            throw Error(ErrorCode::kParse, "block " + std::to_string(h) + ": " + e.what());
        }
    }
    if (blocks.empty()) throw Error(ErrorCode::kParse, "ledger file has no blocks");

    auto ledger = Ledger::from_blocks(std::move(blocks), policy);
    const crypto::PublicKey& key = anchor ? *anchor : ledger.core_public_key();
    if (auto v = ledger.verify_chain(key); !v) {
        throw Error(ErrorCode::kChainVerification,
                    "ledger verification failed at height " +
                        (v.first_bad_height ? std::to_string(*v.first_bad_height) : "?") + ": " +
                        v.reason);
    }
    return ledger;
}

void save_ledger(const Ledger& ledger, const std::filesystem::path& path) {
    const Bytes data = export_ledger(ledger);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

Ledger load_ledger(const std::filesystem::path& path, const std::optional<crypto::PublicKey>& anchor,
                   LedgerPolicy policy) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
    const Bytes data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return import_ledger(data, anchor, policy);
}

ScalabilityReport scalability(double base_stations, double lifespan_years, double block_size) {
    if (!(lifespan_years > 0)) {
        throw Error(ErrorCode::kInvalidArgument, "average lifespan must be positive");
    }
    if (!(base_stations >= 0)) {
        throw Error(ErrorCode::kInvalidArgument, "base station count must be non-negative");
    }
    if (!(block_size > 0)) throw Error(ErrorCode::kInvalidArgument, "block size must be positive");
    ScalabilityReport r;
    r.base_stations = base_stations;
    r.lifespan_years = lifespan_years;
    r.block_size = block_size;
    r.cert_rate = base_stations / (kSecondsPerYear * lifespan_years);
    r.ledger_growth = block_size * r.cert_rate;
    return r;
}

}  // namespace bsauth
