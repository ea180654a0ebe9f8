#include "bsauth/mfa.hpp"

#include <cmath>
#include <json.hpp>

#include "bsauth/error.hpp"

namespace bsauth::mfa {

void Thresholds::validate() const {
    if (!(std::isfinite(tau_d_m) && tau_d_m >= 0) || !(std::isfinite(tau_t_s) && tau_t_s >= 0)) {
        throw Error(ErrorCode::kInvalidArgument, "thresholds must be finite and non-negative");
    }
}

const char* to_string(FailedFactor f) {
    switch (f) {
        case FailedFactor::kNone: return "none";
        case FailedFactor::kIdNotFound: return "id_not_found";
        case FailedFactor::kLocationFail: return "location_fail";
        case FailedFactor::kTimeFail: return "time_fail";
        case FailedFactor::kSignatureFail: return "signature_fail";
    }
    return "unknown";
}

std::string AuthResult::to_json() const {
    nlohmann::ordered_json j;
    j["A"] = authenticated;
    j["failed_factor"] = mfa::to_string(failed_factor);
    j["d_meters"] = distance_m ? nlohmann::ordered_json(*distance_m) : nullptr;
    j["delta_t_seconds"] = delta_t_s ? nlohmann::ordered_json(*delta_t_s) : nullptr;
    return j.dump();
}

std::optional<IdMatch> verify_id(const Ledger& ledger, CellId claimed) {
    auto cert = ledger.lookup(claimed);
    if (!cert) return std::nullopt;
    return IdMatch{cert->body.subject_public_key, cert->body.location};
}

FactorCheck verify_location(const GeoPoint& certified, const GeoPoint& sensed, double tau_d_m,
                            DistanceMetric metric) {
    const double d = distance(certified, sensed, metric);
    return {d <= tau_d_m, d};
}

FactorCheck verify_time(double generated, double received, double tau_t_s) {
    const double dt = received - generated;
    return {dt >= 0.0 && dt <= tau_t_s, dt};
}

namespace {

AuthResult run_factors(const Ledger& ledger, const rrc::SignedSib1& frame, CellId claimed,
                       const SensedContext& ctx, const Thresholds& th, const AuthOptions& options,
                       ReplayGuard* guard) {
    AuthResult r;
    auto id = verify_id(ledger, claimed);
    if (!id) {
        r.failed_factor = FailedFactor::kIdNotFound;
        return r;
    }

    const auto loc = verify_location(id->location, ctx.location, th.tau_d_m, options.metric);
    r.distance_m = loc.value;
    if (!loc.pass) {
        r.failed_factor = FailedFactor::kLocationFail;
        return r;
    }

    const auto time = verify_time(static_cast<double>(frame.timestamp), ctx.time, th.tau_t_s);
    r.delta_t_s = time.value;
    if (!time.pass || (guard && guard->seen(claimed, frame.nonce, ctx.time))) {
        r.failed_factor = FailedFactor::kTimeFail;
        return r;
    }

    // The signed body must name the cell whose key we looked up.
    r.signature_verifications = 1;
    const bool sig_ok = frame.payload.cell_id() == claimed && verify_sib1(id->key, frame);
    if (!sig_ok) {
        r.failed_factor = FailedFactor::kSignatureFail;
        return r;
    }
    r.authenticated = true;
    r.failed_factor = FailedFactor::kNone;
    return r;
}

}  // namespace

AuthResult authenticate(const Ledger& ledger, const rrc::SignedSib1& frame, CellId claimed,
                        const SensedContext& ctx, const Thresholds& th,
                        const AuthOptions& options) {
    return run_factors(ledger, frame, claimed, ctx, th, options, nullptr);
}

bool ReplayGuard::seen(CellId id, std::uint32_t nonce, double now) {
    expire(now);
    return live_.contains({id, nonce});
}

void ReplayGuard::record(CellId id, std::uint32_t nonce, double now) {
    expire(now);
    order_.push_back({now, {id, nonce}});
    live_.insert({id, nonce});
}

void ReplayGuard::expire(double now) {
    while (!order_.empty() && now - order_.front().first > window_s_) {
        live_.erase(live_.find(order_.front().second));
        order_.pop_front();
    }
}

AuthResult authenticate_strict(ReplayGuard& guard, const Ledger& ledger,
                               const rrc::SignedSib1& frame, const SensedContext& ctx,
                               const Thresholds& th, const AuthOptions& options) {
    const CellId claimed = frame.payload.cell_id();
    auto r = run_factors(ledger, frame, claimed, ctx, th, options, &guard);
    if (r.authenticated) guard.record(claimed, frame.nonce, ctx.time);
    return r;
}

AuthResult sota_authenticate(const crypto::PublicKey& root, const rrc::SotaSib1& frame,
                             double received, double tau_t_s) {
    AuthResult r;
    const auto time = verify_time(static_cast<double>(frame.timestamp), received, tau_t_s);
    r.delta_t_s = time.value;
    if (!time.pass) {
        r.failed_factor = FailedFactor::kTimeFail;
        return r;
    }

    r.failed_factor = FailedFactor::kSignatureFail;
    const auto suite = root.suite();
    const auto& sigs = frame.chain_signatures;
    if (frame.intermediary_public_key.suite() != suite || frame.bs_public_key.suite() != suite ||
        sigs[0].suite != suite || sigs[1].suite != suite || sigs[2].suite != suite) {
        return r;
    }
    r.signature_verifications = 1;
    if (!crypto::verify(root, rrc::intermediary_credential_bytes(frame.intermediary_public_key),
                        sigs[0])) {
        return r;
    }
    r.signature_verifications = 2;
    if (!crypto::verify(frame.intermediary_public_key,
                        rrc::bs_credential_bytes(frame.payload.cell_id(), frame.bs_public_key),
                        sigs[1])) {
        return r;
    }
    r.signature_verifications = 3;
    if (!crypto::verify(frame.bs_public_key,
                        rrc::signing_bytes(frame.payload, frame.nonce, frame.timestamp), sigs[2])) {
        return r;
    }
    r.authenticated = true;
    r.failed_factor = FailedFactor::kNone;
    return r;
}

}  // namespace bsauth::mfa
