#include <doctest.h>

#include <json.hpp>

#include "bsauth/error.hpp"
#include "bsauth/mfa.hpp"
#include "mfa_oracle.hpp"

using namespace bsauth;
using namespace bsauth::testing;
using mfa::FailedFactor;

namespace {

struct Setup {
    World w = World::make(2);
    GeoPoint bs_loc = w.certs[0].body.location;
    CellId cell = w.certs[0].body.subject_cell_id;
    std::uint32_t t = static_cast<std::uint32_t>(kNow);

    rrc::SignedSib1 frame(std::uint32_t nonce = 1) const {
        return rrc::sign_sib1(w.bs_keys[0].private_key, rrc::Sib1Payload::synthetic(cell, 50), nonce, t);
    }
    mfa::SensedContext at(double meters, double dt) const {
        return {destination(bs_loc, 90, meters), static_cast<double>(t) + dt};
    }
};

}  // namespace

TEST_CASE("legitimate frame passes every factor") {
    Setup s;
    const auto r = mfa::authenticate(s.w.ledger, s.frame(), s.at(500, 0.2), {});
    CHECK(r.authenticated);
    CHECK(r.failed_factor == FailedFactor::kNone);
    CHECK(r.signature_verifications == 1);
    CHECK(*r.distance_m == doctest::Approx(500).epsilon(1e-6));
    CHECK(*r.delta_t_s == doctest::Approx(0.2));

    const auto j = nlohmann::json::parse(r.to_json());
    CHECK(j["A"] == true);
    CHECK(j["failed_factor"] == "none");
}

TEST_CASE("factors fail in order") {
    Setup s;
    const mfa::Thresholds th{1000, 1.0};
    const auto unknown = rrc::sign_sib1(s.w.bs_keys[0].private_key,
                                        rrc::Sib1Payload::synthetic(CellId{0xDEAD}, 50), 1, s.t);
    auto r = mfa::authenticate(s.w.ledger, unknown, s.at(5000, 9), th);
    CHECK(r.failed_factor == FailedFactor::kIdNotFound);
    CHECK_FALSE(r.distance_m.has_value());
    CHECK(r.signature_verifications == 0);

    r = mfa::authenticate(s.w.ledger, s.frame(), s.at(1500, 9), th);
    CHECK(r.failed_factor == FailedFactor::kLocationFail);
    CHECK_FALSE(r.delta_t_s.has_value());

    r = mfa::authenticate(s.w.ledger, s.frame(), s.at(100, 1.5), th);
    CHECK(r.failed_factor == FailedFactor::kTimeFail);
    r = mfa::authenticate(s.w.ledger, s.frame(), s.at(100, -0.1), th);
    CHECK(r.failed_factor == FailedFactor::kTimeFail);
    CHECK(r.signature_verifications == 0);

    auto forged = s.frame();
    forged.nonce ^= 1;
    r = mfa::authenticate(s.w.ledger, forged, s.at(100, 0.5), th);
    CHECK(r.failed_factor == FailedFactor::kSignatureFail);
    CHECK(r.signature_verifications == 1);

    // A valid frame presented under another registered cell.
    r = mfa::authenticate(s.w.ledger, s.frame(), s.w.certs[1].body.subject_cell_id,
                          {s.w.certs[1].body.location, s.t + 0.1}, th);
    CHECK(r.failed_factor == FailedFactor::kSignatureFail);
}

TEST_CASE("thresholds are inclusive") {
    Setup s;
    const auto f = s.frame();
    const auto ctx = s.at(800, 1.0);
    const double d = haversine_distance(s.bs_loc, ctx.location);
    CHECK(mfa::authenticate(s.w.ledger, f, ctx, {d, 1.0}).authenticated);
    CHECK_FALSE(mfa::authenticate(s.w.ledger, f, ctx, {std::nextafter(d, 0.0), 1.0}).authenticated);
    CHECK(mfa::verify_time(10, 10, 0).pass);
    CHECK_FALSE(mfa::verify_time(10, 9.999, 5).pass);
    CHECK_THROWS_AS((mfa::Thresholds{-1, 1}).validate(), Error);
    CHECK_THROWS_AS((mfa::Thresholds{1, std::nan("")}).validate(), Error);
}

TEST_CASE("strict nonce mode rejects exact repeats only") {
    Setup s;
    mfa::ReplayGuard guard(1.5);
    const auto f = s.frame(99);
    CHECK(mfa::authenticate_strict(guard, s.w.ledger, f, s.at(10, 0.1), {}).authenticated);
    const auto again = mfa::authenticate_strict(guard, s.w.ledger, f, s.at(10, 0.4), {});
    CHECK_FALSE(again.authenticated);
    CHECK(again.failed_factor == FailedFactor::kTimeFail);
    CHECK(mfa::authenticate_strict(guard, s.w.ledger, s.frame(100), s.at(10, 0.5), {}).authenticated);
    // Default mode accepts the in-window repeat.
    CHECK(mfa::authenticate(s.w.ledger, f, s.at(10, 0.4), {}).authenticated);
}

TEST_CASE("certificate-chain verifier counts three verifications") {
    const auto root = crypto::generate_keypair(crypto::SuiteId::kEcdsa224, 1);
    const auto mid = crypto::generate_keypair(crypto::SuiteId::kEcdsa224, 2);
    const auto bs = crypto::generate_keypair(crypto::SuiteId::kEcdsa224, 3);
    const CellId cell{77};
    const auto creds = rrc::issue_sota_credentials(root.private_key, mid.private_key, bs.public_key, cell);
    const auto f = rrc::sign_sota_sib1(bs.private_key, creds, rrc::Sib1Payload::synthetic(cell, 50), 5, 1000);

    auto r = mfa::sota_authenticate(root.public_key, f, 1000.5, 1.5);
    CHECK(r.authenticated);
    CHECK(r.signature_verifications == 3);
    CHECK_FALSE(r.distance_m.has_value());

    r = mfa::sota_authenticate(root.public_key, f, 1003, 1.5);
    CHECK(r.failed_factor == FailedFactor::kTimeFail);
    CHECK(r.signature_verifications == 0);

    const auto rogue = crypto::generate_keypair(crypto::SuiteId::kEcdsa224, 9);
    r = mfa::sota_authenticate(rogue.public_key, f, 1000.5, 1.5);
    CHECK(r.failed_factor == FailedFactor::kSignatureFail);
    CHECK(r.signature_verifications == 1);
}

TEST_CASE("authenticate agrees with the conjunction oracle") {
    MfaCaseGenerator gen(2024);
    std::map<FailedFactor, int> seen;
    for (int i = 0; i < 1500; ++i) {
        const auto c = gen.next();
        const auto got = run(c);
        const auto want = oracle_authenticate(c);
        REQUIRE(got.authenticated == want.authenticated);
        CHECK(got.failed_factor == want.failed_factor);
        ++seen[got.failed_factor];
    }
    // Every branch was exercised.
    CHECK(seen.size() == 5);
}

TEST_CASE("loosening thresholds never revokes acceptance") {
    MfaCaseGenerator gen(77);
    for (int i = 0; i < 300; ++i) {
        auto c = gen.next();
        const bool tight = run(c).authenticated;
        c.th.tau_d_m += gen.uniform(0, 2000);
        c.th.tau_t_s += gen.uniform(0, 2);
        const bool loose = run(c).authenticated;
        CHECK((!tight || loose));
    }
}
