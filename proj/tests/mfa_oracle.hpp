#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bsauth/mfa.hpp"
#include "support.hpp"

namespace bsauth::testing {

// A randomized authentication input together with everything needed to
// re-derive the verdict without going through the library's verifier.
struct MfaCase {
    const Ledger* ledger = nullptr;
    rrc::SignedSib1 frame;
    CellId claimed;
    mfa::SensedContext ctx;
    mfa::Thresholds th;
};

// Conjunction of the four factors computed from first principles: a linear
// scan for the newest certificate, haversine distance, the time window and a
// raw signature check over a locally built message.
inline mfa::AuthResult oracle_authenticate(const MfaCase& c) {
    mfa::AuthResult r;
    const BaseStationCertificate* cert = nullptr;
    const auto blocks = c.ledger->blocks();
    for (std::size_t h = 1; h < blocks.size(); ++h) {
        if (blocks[h].payload.body.subject_cell_id == c.claimed) cert = &blocks[h].payload;
    }
    if (!cert) {
        r.failed_factor = mfa::FailedFactor::kIdNotFound;
        return r;
    }
    const double d = haversine_distance(cert->body.location, c.ctx.location);
    r.distance_m = d;
    if (!(d <= c.th.tau_d_m)) {
        r.failed_factor = mfa::FailedFactor::kLocationFail;
        return r;
    }
    const double dt = c.ctx.time - static_cast<double>(c.frame.timestamp);
    r.delta_t_s = dt;
    if (!(dt >= 0 && dt <= c.th.tau_t_s)) {
        r.failed_factor = mfa::FailedFactor::kTimeFail;
        return r;
    }
    ByteWriter w;
    w.raw(c.frame.payload.base_fields());
    w.u32(c.frame.nonce);
    w.u32(c.frame.timestamp);
    r.signature_verifications = 1;
    const auto& key = cert->body.subject_public_key;
    const bool sig = c.frame.payload.cell_id() == c.claimed &&
                     key.suite() == c.frame.signature.suite &&
                     crypto::verify(key, std::move(w).take(), c.frame.signature);
    if (!sig) {
        r.failed_factor = mfa::FailedFactor::kSignatureFail;
        return r;
    }
    r.authenticated = true;
    r.failed_factor = mfa::FailedFactor::kNone;
    return r;
}

// Draws cases over a few ledgers so every factor fails some of the time.
class MfaCaseGenerator {
public:
    explicit MfaCaseGenerator(std::uint64_t seed) : rng_(seed) {
        worlds_.push_back(World::make(4, 1));
        worlds_.push_back(World::make(3, 2, crypto::SuiteId::kEcdsa256));
        // The third world reuses cell ids from the first under other keys.
        worlds_.push_back(World::make(4, 3));
        strangers_.push_back(crypto::generate_keypair(crypto::SuiteId::kEcdsa224, 4242));
        strangers_.push_back(crypto::generate_keypair(crypto::SuiteId::kEcdsa256, 4343));
    }

    MfaCase next() {
        MfaCase c;
        const auto& w = worlds_[pick(worlds_.size())];
        c.ledger = &w.ledger;
        const std::size_t i = pick(w.certs.size());
        const auto& cert = w.certs[i];

        CellId cell = cert.body.subject_cell_id;
        if (chance(0.1)) cell = CellId{0x50000 + pick(1000)};
        const crypto::PrivateKey* signer = &w.bs_keys[i].private_key;
        if (chance(0.1)) signer = &strangers_[pick(strangers_.size())].private_key;
        if (chance(0.05)) signer = &w.bs_keys[pick(w.bs_keys.size())].private_key;

        const auto t = static_cast<std::uint32_t>(kNow + static_cast<std::int64_t>(pick(1000)));
        auto payload = rrc::Sib1Payload::synthetic(cell, 5 + pick(60), rng_());
        c.frame = rrc::sign_sib1(*signer, payload, static_cast<std::uint32_t>(rng_()), t);
        if (chance(0.05)) {
            Bytes f = c.frame.payload.base_fields();
            f.back() ^= 0x5A;
            c.frame.payload = rrc::Sib1Payload::from_bytes(f);
        }
        if (chance(0.05)) ++c.frame.nonce;

        c.claimed = c.frame.payload.cell_id();
        if (chance(0.05)) c.claimed = w.certs[pick(w.certs.size())].body.subject_cell_id;

        c.th.tau_d_m = uniform(0, 5000);
        c.th.tau_t_s = uniform(0, 3);
        c.ctx.location = destination(cert.body.location, uniform(0, 360), uniform(0, 2 * c.th.tau_d_m + 10));
        c.ctx.time = static_cast<double>(t) + uniform(-1, 2 * c.th.tau_t_s + 0.5);
        return c;
    }

    std::mt19937_64& rng() { return rng_; }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

private:
    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
    bool chance(double p) { return uniform(0, 1) < p; }

    std::mt19937_64 rng_;
    std::vector<World> worlds_;
    std::vector<crypto::KeyPair> strangers_;
};

inline mfa::AuthResult run(const MfaCase& c) {
    return mfa::authenticate(*c.ledger, c.frame, c.claimed, c.ctx, c.th);
}

}  // namespace bsauth::testing
