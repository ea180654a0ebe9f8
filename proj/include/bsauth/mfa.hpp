#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "bsauth/certificate.hpp"
#include "bsauth/geo.hpp"
#include "bsauth/ledger.hpp"
#include "bsauth/rrc.hpp"

namespace bsauth::mfa {

struct Thresholds {
    double tau_d_m = 2000.0;
    double tau_t_s = 1.5;

    /// Throws kInvalidArgument for negative or non-finite values.
    void validate() const;
};

/// What the UE measures itself at reception: its position and clock.
struct SensedContext {
    GeoPoint location;
    double time = 0.0;  // unix seconds
};

enum class FailedFactor : std::uint8_t {
    kNone,
    kIdNotFound,
    kLocationFail,
    kTimeFail,
    kSignatureFail,
};

const char* to_string(FailedFactor f);

struct AuthResult {
    bool authenticated = false;  // A
    FailedFactor failed_factor = FailedFactor::kIdNotFound;
    std::optional<double> distance_m;
    std::optional<double> delta_t_s;
    /// Signature verifications actually performed for this frame.
    int signature_verifications = 0;

    /// {"A", "failed_factor", "d_meters", "delta_t_seconds"}; unreached
    /// factors serialize as null.
    std::string to_json() const;
    friend bool operator==(const AuthResult&, const AuthResult&) = default;
};

struct AuthOptions {
    DistanceMetric metric = DistanceMetric::kHaversine;
};

struct IdMatch {
    crypto::PublicKey key;
    GeoPoint location;
};

struct FactorCheck {
    bool pass = false;
    double value = 0.0;
};

std::optional<IdMatch> verify_id(const Ledger& ledger, CellId claimed);
/// Inclusive: passes when d <= tau_d.
FactorCheck verify_location(const GeoPoint& certified, const GeoPoint& sensed, double tau_d_m,
                            DistanceMetric metric = DistanceMetric::kHaversine);
/// Passes when 0 <= (t_bar - t) <= tau_t. Future timestamps fail.
FactorCheck verify_time(double generated, double received, double tau_t_s);

/// Sequential ID -> L -> t -> signature check. Stops at the first failing
/// factor; the ledger must have been chain-verified when it was synced.
AuthResult authenticate(const Ledger& ledger, const rrc::SignedSib1& frame, CellId claimed,
                        const SensedContext& ctx, const Thresholds& th,
                        const AuthOptions& options = {});
inline AuthResult authenticate(const Ledger& ledger, const rrc::SignedSib1& frame,
                               const SensedContext& ctx, const Thresholds& th,
                               const AuthOptions& options = {}) {
    return authenticate(ledger, frame, frame.payload.cell_id(), ctx, th, options);
}

/// Optional strict replay mode: remembers accepted (cell, nonce) pairs for
/// tau_t seconds and rejects exact repeats at the time factor. Not thread
/// safe; keep one per UE.
class ReplayGuard {
public:
    explicit ReplayGuard(double window_s) : window_s_(window_s) {}

    bool seen(CellId id, std::uint32_t nonce, double now);
    void record(CellId id, std::uint32_t nonce, double now);

private:
    void expire(double now);

    double window_s_;
    std::deque<std::pair<double, std::pair<CellId, std::uint32_t>>> order_;
    std::multiset<std::pair<CellId, std::uint32_t>> live_;
};

AuthResult authenticate_strict(ReplayGuard& guard, const Ledger& ledger,
                               const rrc::SignedSib1& frame, const SensedContext& ctx,
                               const Thresholds& th, const AuthOptions& options = {});

/// Certificate-chain verifier: freshness on t, then the three chain
/// signatures anchored at the USIM-held root key. It has no location factor.
AuthResult sota_authenticate(const crypto::PublicKey& root, const rrc::SotaSib1& frame,
                             double received, double tau_t_s);

}  // namespace bsauth::mfa
