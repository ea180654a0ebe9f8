#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bsauth/certificate.hpp"
#include "bsauth/crypto.hpp"
#include "bsauth/geo.hpp"
#include "bsauth/ledger.hpp"
#include "bsauth/mfa.hpp"
#include "bsauth/rrc.hpp"

namespace bsauth::sim {

// ---------------------------------------------------------------------------
// Offline delivery
// ---------------------------------------------------------------------------

enum class ChannelKind : std::uint8_t { kAdhocWifi, kAdhocBluetooth, kCloudTcp };
enum class DeliverySource : std::uint8_t { kThirdParty, kCloud };

const char* to_string(ChannelKind k);
const char* to_string(DeliverySource s);

struct ChannelProfile {
    std::string name;
    ChannelKind kind = ChannelKind::kAdhocWifi;
    DeliverySource source = DeliverySource::kThirdParty;
    double latency_mean_s = 0.0;
    /// Standard deviation of a normal jitter term; 0 disables jitter.
    double jitter_stddev_s = 0.0;

    /// Throws kConfig unless the mean latency is positive.
    void validate() const;
    /// Mean plus jitter, floored at a tenth of the mean.
    double sample_latency(std::mt19937_64& rng) const;
};

/// wifi (32.22 ms), bluetooth (1070.2 ms), cloud-iowa (52.23 ms) and
/// cloud-singapore (1060.05 ms), all jitter-free.
const std::vector<ChannelProfile>& default_channel_profiles();
/// Throws kConfig for unknown names.
const ChannelProfile& channel_profile(const std::string& name);

struct SyncOutcome {
    bool accepted = false;
    /// The UE's copy after the sync: the delivered ledger when accepted,
    /// otherwise the copy it already held.
    Ledger ledger;
    double latency_s = 0.0;
    std::string reason;
};

/// Delivers a ledger snapshot to a UE. The UE re-verifies the whole chain
/// against its USIM anchor before adopting it; hostile copies are dropped.
SyncOutcome offline_sync(const Ledger& current, const crypto::PublicKey& usim_anchor,
                         const Ledger& delivered, const ChannelProfile& channel,
                         std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Cost models
// ---------------------------------------------------------------------------

enum class ChannelQuality : std::uint8_t { kGood, kMedium, kPoor };

const char* to_string(ChannelQuality q);
ChannelQuality parse_channel_quality(const std::string& s);

/// RRC connection setup durations per channel class, in milliseconds.
struct RrcPhaseModel {
    double good_ms = 251.58;
    double medium_ms = 300.90;
    double poor_ms = 304.11;

    double setup_ms(ChannelQuality q) const;
};

double rrc_phase_model(ChannelQuality q, const RrcPhaseModel& model = {});

/// Modeled UE compute and energy. Energy is power times time, so energy
/// ratios equal time ratios.
struct CostModel {
    double signature_verification_ms = 4.744;
    double factor_checks_ms = 0.0776;  // ID, L and t together
    double power_w = 1.0;

    double energy_mj(double time_ms) const { return power_w * time_ms; }
};

// ---------------------------------------------------------------------------
// Scenario configuration
// ---------------------------------------------------------------------------

enum class AttackMode : std::uint8_t { kNewBs, kSpoofResign, kSpoofForge, kReplay, kWormhole };

const char* to_string(AttackMode m);
AttackMode parse_attack_mode(const std::string& s);
/// Failure the sequential verifier must report for every frame of this mode.
mfa::FailedFactor expected_failure(AttackMode m);

struct BaseStationConfig {
    std::string name;
    CellId cell_id;
    GeoPoint location;
    crypto::SuiteId suite = crypto::SuiteId::kEcdsa224;
    double coverage_m = 5000.0;
    double tx_power_dbm = 43.0;
};

struct UeConfig {
    std::string name;
    GeoPoint location;
    mfa::Thresholds thresholds;
    rrc::Scheme scheme = rrc::Scheme::kOurs;
    DistanceMetric metric = DistanceMetric::kHaversine;
    /// Radius of the uniform disc the sensed position is drawn from.
    double location_noise_m = 0.0;
    /// Constant offset of the UE clock against the simulation clock.
    double clock_offset_s = 0.0;
    bool strict_nonce = false;
    /// Channel used for the offline ledger delivery.
    std::string channel = "wifi";
    /// Deliver a tampered ledger copy through the third party.
    bool tampered_delivery = false;
};

struct AttackerConfig {
    std::string name;
    AttackMode mode = AttackMode::kNewBs;
    /// Cell the attacker imitates or captures from; defaults to the first BS.
    std::optional<CellId> target_cell;
    /// Cell identity announced by kNewBs.
    CellId fabricated_cell{0xFFFFFFFFFull};
    /// Where the attacker transmits (the far end for a wormhole).
    GeoPoint location;
    /// Where a wormhole captures frames; defaults to the target BS location.
    std::optional<GeoPoint> capture_location;
    /// Replay delay, or wormhole relay latency, in seconds.
    double delay_s = 0.001;
    double tx_power_dbm = 60.0;
    double coverage_m = 5000.0;
    crypto::SuiteId suite = crypto::SuiteId::kEcdsa224;
};

struct Expectations {
    /// Required fraction of legitimate frames accepted, per scheme.
    std::map<rrc::Scheme, double> legit_acceptance;
    /// Required fraction of attack frames rejected, per scheme.
    std::map<rrc::Scheme, double> attack_rejection;
    /// Required fraction of attack frames accepted, per scheme.
    std::map<rrc::Scheme, double> attack_acceptance;
    /// Factor that must be reported for every rejected attack frame.
    std::map<rrc::Scheme, mfa::FailedFactor> attack_failed_factor;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::uint64_t seed = 1;
    std::uint32_t trials = 1;
    std::int64_t start_time = 1'760'000'000;
    std::uint32_t broadcasts = 4;
    double sib1_period_s = 0.16;
    std::size_t base_size = rrc::kDefaultBaseSize;
    std::string issuer_id = "core-network";
    crypto::SuiteId core_suite = crypto::SuiteId::kEcdsa256;
    /// Include every reception in the report (always on for single trials).
    bool record_frames = false;
    std::vector<BaseStationConfig> base_stations;
    std::vector<UeConfig> ues;
    std::vector<AttackerConfig> attackers;
    std::map<std::string, ChannelProfile> channels;
    CostModel cost;
    RrcPhaseModel rrc_phases;
    ChannelQuality channel_quality = ChannelQuality::kGood;
    Expectations expect;

    /// Throws kConfig naming the offending field.
    void validate() const;
    const ChannelProfile& channel(const std::string& name) const;
};

/// Parses the JSON scenario schema (see docs/FORMATS.md). Errors are kConfig
/// with a JSON-pointer-like field path.
ScenarioConfig parse_scenario_config(const std::string& json_text);
ScenarioConfig load_scenario_config(const std::string& path);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct Reception {
    std::uint32_t trial = 0;
    std::string ue;
    rrc::Scheme scheme = rrc::Scheme::kOurs;
    std::string transmitter;
    /// "legit" or the attack mode.
    std::string origin;
    CellId cell_id;
    std::uint32_t window = 0;
    double rx_time = 0.0;
    double signal = 0.0;
    mfa::AuthResult result;
};

struct OutcomeCounts {
    std::uint64_t frames = 0;
    std::uint64_t accepted = 0;
    std::map<std::string, std::uint64_t> failed_factors;

    std::uint64_t rejected() const { return frames - accepted; }
    double acceptance_rate() const;
    double rejection_rate() const;
};

struct SchemeCost {
    std::uint64_t accepted_frames = 0;
    std::uint64_t signature_verifications = 0;
    std::uint64_t accepted_frame_verifications = 0;
    double verifications_per_accepted_frame = 0.0;
    double modeled_verification_ms = 0.0;  // per accepted frame
    double modeled_energy_mj = 0.0;        // per accepted frame
};

struct Attachment {
    std::uint32_t trial = 0;
    std::string ue;
    std::uint32_t window = 0;
    /// Empty when no received frame authenticated.
    std::string transmitter;
    std::string origin;
};

struct SyncRecord {
    std::uint32_t trial = 0;
    std::string ue;
    std::string channel;
    bool accepted = false;
    double latency_ms = 0.0;
    std::string reason;
};

struct AssertionResult {
    std::string name;
    std::string expected;
    std::string actual;
    bool pass = false;
};

struct ScenarioReport {
    std::string name;
    std::uint64_t seed = 0;
    std::uint32_t trials = 0;
    std::vector<Reception> receptions;
    /// Keyed by scheme, then origin.
    std::map<rrc::Scheme, std::map<std::string, OutcomeCounts>> outcomes;
    std::map<rrc::Scheme, SchemeCost> costs;
    std::vector<Attachment> attachments;
    std::vector<SyncRecord> syncs;
    double rrc_setup_ms = 0.0;
    /// Ours-scheme UE compute as a fraction of RRC setup.
    double verification_fraction_of_rrc = 0.0;
    double modeled_energy_ratio = 0.0;  // sota / ours
    double modeled_time_ratio = 0.0;    // sota / ours
    std::vector<AssertionResult> assertions;

    /// Totals over one scheme's frames of the given kind.
    OutcomeCounts legit(rrc::Scheme s) const;
    OutcomeCounts attack(rrc::Scheme s) const;
    bool assertions_pass() const;
    std::string to_json() const;
    /// One row per (scheme, origin).
    std::string summary_csv() const;
};

/// Runs every trial of the scenario in simulated time. Equal configs give
/// byte-identical JSON reports.
ScenarioReport run_scenario(const ScenarioConfig& config);

// ---------------------------------------------------------------------------
// Verification benchmark (wall clock)
// ---------------------------------------------------------------------------

struct TimingStats {
    int verifications_per_frame = 0;
    std::size_t samples = 0;
    double mean_ms = 0.0;
    double stddev_ms = 0.0;
    double ci95_ms = 0.0;
    double median_ms = 0.0;
};

struct BenchReport {
    crypto::SuiteId suite{};
    std::size_t iterations = 0;
    TimingStats ours;
    TimingStats sota;
    double time_ratio = 0.0;
    double power_w = 1.0;
    double ours_energy_mj = 0.0;
    double sota_energy_mj = 0.0;
    double energy_ratio = 0.0;

    std::string to_json() const;
};

/// Times one verification per frame (ours) against the three chain
/// verifications (certificate chain) on real frames. iterations >= 100.
BenchReport benchmark_verification(crypto::SuiteId suite, std::size_t iterations,
                                   const CostModel& cost = {});

}  // namespace bsauth::sim
