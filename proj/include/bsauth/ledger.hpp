#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bsauth/bytes.hpp"
#include "bsauth/certificate.hpp"
#include "bsauth/crypto.hpp"

namespace bsauth {

/// One certificate per block. block_hash is SHA-256 over every other field,
/// writer signature included.
struct Block {
    std::uint64_t height = 0;
    Digest prev_hash{};
    std::int64_t timestamp = 0;
    /// Proof-of-work target in leading zero bits. Always 0 for this ledger,
    /// which makes the work check vacuous.
    std::uint8_t difficulty = 0;
    BaseStationCertificate payload;
    crypto::Signature writer_signature;
    Digest block_hash{};

    friend bool operator==(const Block&, const Block&) = default;
};

/// Bytes covered by the writer signature.
Bytes block_signing_bytes(const Block& b);
/// Signing bytes followed by the writer signature; input to block_hash.
Bytes block_hash_input(const Block& b);
Digest compute_block_hash(const Block& b);
Bytes encode_block(const Block& b);
Block decode_block(ByteView bytes);
bool meets_difficulty(const Digest& hash, std::uint8_t difficulty);

struct LedgerPolicy {
    /// Permit a newer certificate for an already registered cell ID.
    bool allow_reissue = false;
};

struct ChainVerdict {
    bool ok = false;
    std::optional<std::uint64_t> first_bad_height;
    std::string reason;

    explicit operator bool() const { return ok; }
};

struct BlockSizeStats {
    std::size_t min = 0;
    std::size_t max = 0;
    double mean = 0.0;
    std::size_t total = 0;
};

/// Immutable snapshot of the permissioned certificate chain. Appends return a
/// new snapshot and never touch blocks already shared with other readers.
class Ledger {
public:
    Ledger() = default;

    /// The genesis payload is the core network's self-signed record; its key
    /// becomes the only authorized writer. Throws kInvalidCertificate.
    static Ledger create_genesis(const crypto::KeyPair& core,
                                 const BaseStationCertificate& core_self_certificate,
                                 std::int64_t timestamp, LedgerPolicy policy = {});

    /// Rebuilds the snapshot and index from raw blocks without verifying them.
    static Ledger from_blocks(std::vector<Block> blocks, LedgerPolicy policy = {});

    /// Throws kUnauthorizedWriter, kInvalidCertificate or kDuplicateCellId.
    Ledger append(const BaseStationCertificate& cert, const crypto::PrivateKey& writer,
                  std::int64_t timestamp) const;
    Ledger append_all(std::span<const BaseStationCertificate> certs,
                      const crypto::PrivateKey& writer, std::int64_t timestamp) const;

    ChainVerdict verify_chain(const crypto::PublicKey& core_public_key) const;

    /// Most recent certificate registered for the cell, if any.
    std::optional<BaseStationCertificate> lookup(CellId id) const;

    std::size_t height() const { return blocks_ ? blocks_->size() : 0; }
    bool empty() const { return height() == 0; }
    std::span<const Block> blocks() const;
    const Block& block(std::size_t height) const;
    const crypto::PublicKey& core_public_key() const;
    const LedgerPolicy& policy() const { return policy_; }
    /// Number of registered (non-genesis) cell IDs.
    std::size_t registered_cells() const { return index_ ? index_->size() : 0; }
    BlockSizeStats measured_block_sizes() const;

private:
    Ledger(std::shared_ptr<const std::vector<Block>> blocks,
           std::shared_ptr<const std::map<CellId, std::size_t>> index, LedgerPolicy policy)
        : blocks_(std::move(blocks)), index_(std::move(index)), policy_(policy) {}

    std::shared_ptr<const std::vector<Block>> blocks_;
    std::shared_ptr<const std::map<CellId, std::size_t>> index_;
    LedgerPolicy policy_;
};

/// "BSL1" followed by u32-length-prefixed encoded blocks in height order.
Bytes export_ledger(const Ledger& ledger);
/// Parses and re-verifies. With an anchor the genesis key must equal it;
/// otherwise the chain is checked against its own genesis key. Throws kParse
/// or kChainVerification.
Ledger import_ledger(ByteView file, const std::optional<crypto::PublicKey>& anchor = std::nullopt,
                     LedgerPolicy policy = {});
void save_ledger(const Ledger& ledger, const std::filesystem::path& path);
Ledger load_ledger(const std::filesystem::path& path,
                   const std::optional<crypto::PublicKey>& anchor = std::nullopt,
                   LedgerPolicy policy = {});

inline constexpr double kSecondsPerYear = 3.1536e7;
inline constexpr double kDefaultBlockSize = 1417.0;

struct ScalabilityReport {
    double base_stations = 0;    // x
    double lifespan_years = 0;   // y
    double block_size = 0;       // bytes
    double cert_rate = 0;        // certificates per second
    double ledger_growth = 0;    // bytes per second
};

/// Certificate upload rate when every base station is re-certified once per
/// lifespan and each block carries one certificate.
ScalabilityReport scalability(double base_stations, double lifespan_years,
                              double block_size = kDefaultBlockSize);

}  // namespace bsauth
