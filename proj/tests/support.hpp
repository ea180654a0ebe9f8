#pragma once

#include <cstdint>
#include <vector>

#include "bsauth/certificate.hpp"
#include "bsauth/crypto.hpp"
#include "bsauth/ledger.hpp"

namespace bsauth::testing {

inline constexpr std::int64_t kNow = 1'760'000'000;

inline Validity one_year() { return {kNow - 86400, kNow + 365 * 86400}; }

// A core network, a handful of certified cells and the ledger carrying them.
struct World {
    crypto::KeyPair core;
    std::vector<crypto::KeyPair> bs_keys;
    std::vector<BaseStationCertificate> certs;
    Ledger ledger;

    static World make(std::size_t cells, std::uint64_t seed = 1,
                      crypto::SuiteId bs_suite = crypto::SuiteId::kEcdsa224) {
        World w;
        w.core = crypto::generate_keypair(crypto::SuiteId::kEcdsa256, seed);
        CertificateIssuer issuer("core-network", w.core);
        w.ledger = Ledger::create_genesis(w.core, issuer.self_certificate(one_year()), kNow - 7200);
        for (std::size_t i = 0; i < cells; ++i) {
            auto kp = crypto::generate_keypair(bs_suite, seed * 1000 + i + 1);
            const GeoPoint loc{41.66 + 0.05 * static_cast<double>(i), -91.53};
            w.certs.push_back(
                issuer.sign_csr(build_csr(CellId{0x1000 + i}, kp, loc, one_year(), bs_suite)));
            w.bs_keys.push_back(std::move(kp));
        }
        w.ledger = w.ledger.append_all(w.certs, w.core.private_key, kNow - 3600);
        return w;
    }
};

}  // namespace bsauth::testing
