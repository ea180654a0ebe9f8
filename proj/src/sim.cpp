#include "bsauth/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <json.hpp>

#include "bsauth/error.hpp"

namespace bsauth::sim {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

const char* to_string(ChannelKind k) {
    switch (k) {
        case ChannelKind::kAdhocWifi: return "adhoc_wifi";
        case ChannelKind::kAdhocBluetooth: return "adhoc_bluetooth";
        case ChannelKind::kCloudTcp: return "cloud_tcp";
    }
    return "unknown";
}

const char* to_string(DeliverySource s) {
    return s == DeliverySource::kThirdParty ? "third_party" : "cloud";
}

const char* to_string(ChannelQuality q) {
    switch (q) {
        case ChannelQuality::kGood: return "good";
        case ChannelQuality::kMedium: return "medium";
        case ChannelQuality::kPoor: return "poor";
    }
    return "unknown";
}

ChannelQuality parse_channel_quality(const std::string& s) {
    if (s == "good") return ChannelQuality::kGood;
    if (s == "medium") return ChannelQuality::kMedium;
    if (s == "poor") return ChannelQuality::kPoor;
    throw Error(ErrorCode::kInvalidArgument, "unknown channel quality '" + s + "'");
}

const char* to_string(AttackMode m) {
    switch (m) {
        case AttackMode::kNewBs: return "new_bs";
        case AttackMode::kSpoofResign: return "spoof_resign";
        case AttackMode::kSpoofForge: return "spoof_forge";
        case AttackMode::kReplay: return "replay";
        case AttackMode::kWormhole: return "wormhole";
    }
    return "unknown";
}

AttackMode parse_attack_mode(const std::string& s) {
    for (auto m : {AttackMode::kNewBs, AttackMode::kSpoofResign, AttackMode::kSpoofForge,
                   AttackMode::kReplay, AttackMode::kWormhole}) {
        if (s == to_string(m)) return m;
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown attack mode '" + s + "'");
}

mfa::FailedFactor expected_failure(AttackMode m) {
    switch (m) {
        case AttackMode::kNewBs: return mfa::FailedFactor::kIdNotFound;
        case AttackMode::kSpoofResign:
        case AttackMode::kSpoofForge: return mfa::FailedFactor::kSignatureFail;
        case AttackMode::kReplay: return mfa::FailedFactor::kTimeFail;
        case AttackMode::kWormhole: return mfa::FailedFactor::kLocationFail;
    }
    return mfa::FailedFactor::kNone;
}

// ---------------------------------------------------------------------------
// Offline delivery and cost models
// ---------------------------------------------------------------------------

void ChannelProfile::validate() const {
    if (!(latency_mean_s > 0)) {
        throw Error(ErrorCode::kConfig, "channel '" + name + "': latency mean must be positive");
    }
    if (!(jitter_stddev_s >= 0)) {
        throw Error(ErrorCode::kConfig, "channel '" + name + "': jitter must be non-negative");
    }
}

double ChannelProfile::sample_latency(std::mt19937_64& rng) const {
    if (jitter_stddev_s <= 0) return latency_mean_s;
    std::normal_distribution<double> jitter(0.0, jitter_stddev_s);
    return std::max(latency_mean_s / 10.0, latency_mean_s + jitter(rng));
}

const std::vector<ChannelProfile>& default_channel_profiles() {
    static const std::vector<ChannelProfile> kProfiles{
        {"wifi", ChannelKind::kAdhocWifi, DeliverySource::kThirdParty, 0.03222, 0.0},
        {"bluetooth", ChannelKind::kAdhocBluetooth, DeliverySource::kThirdParty, 1.0702, 0.0},
        {"cloud-iowa", ChannelKind::kCloudTcp, DeliverySource::kCloud, 0.05223, 0.0},
        {"cloud-singapore", ChannelKind::kCloudTcp, DeliverySource::kCloud, 1.06005, 0.0},
    };
    return kProfiles;
}

const ChannelProfile& channel_profile(const std::string& name) {
    for (const auto& p : default_channel_profiles()) {
        if (p.name == name) return p;
    }
    throw Error(ErrorCode::kConfig, "unknown channel profile '" + name + "'");
}

SyncOutcome offline_sync(const Ledger& current, const crypto::PublicKey& usim_anchor,
                         const Ledger& delivered, const ChannelProfile& channel,
                         std::mt19937_64& rng) {
    channel.validate();
    SyncOutcome out;
    out.latency_s = channel.sample_latency(rng);
    const auto verdict = delivered.verify_chain(usim_anchor);
    if (!verdict) {
        out.accepted = false;
        out.ledger = current;
        out.reason = "chain verification failed" +
                     (verdict.first_bad_height
                          ? " at height " + std::to_string(*verdict.first_bad_height)
                          : std::string()) +
                     ": " + verdict.reason;
        return out;
    }
    out.accepted = true;
    out.ledger = delivered;
    return out;
}

double RrcPhaseModel::setup_ms(ChannelQuality q) const {
    switch (q) {
        case ChannelQuality::kGood: return good_ms;
        case ChannelQuality::kMedium: return medium_ms;
        case ChannelQuality::kPoor: return poor_ms;
    }
    return good_ms;
}

double rrc_phase_model(ChannelQuality q, const RrcPhaseModel& model) { return model.setup_ms(q); }

// ---------------------------------------------------------------------------
// Config validation
// ---------------------------------------------------------------------------

const ChannelProfile& ScenarioConfig::channel(const std::string& channel_name) const {
    auto it = channels.find(channel_name);
    if (it == channels.end()) {
        throw Error(ErrorCode::kConfig, "unknown channel profile '" + channel_name + "'");
    }
    return it->second;
}

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& path, const std::string& what) {
        throw Error(ErrorCode::kConfig, path + ": " + what);
    };
    if (trials == 0) fail("/trials", "must be at least 1");
    if (broadcasts == 0) fail("/broadcasts", "must be at least 1");
    if (!(sib1_period_s > 0)) fail("/sib1_period_s", "must be positive");
    if (base_size < rrc::kCellIdentityBytes) {
        fail("/base_size", "must be at least " + std::to_string(rrc::kCellIdentityBytes));
    }
    if (start_time < 0 || start_time > 0xFFFFFFFFll - 86400 * 366) {
        fail("/start_time", "must fit the 32-bit SIB1 timestamp");
    }
    if (base_stations.empty()) fail("/base_stations", "at least one base station is required");
    for (const auto& [name, p] : channels) {
        try {
            p.validate();
        } catch (const Error& e) {
            fail("/channels/" + name, e.what());
        }
    }

    std::set<CellId> cells;
    std::set<std::string> names;
    for (std::size_t i = 0; i < base_stations.size(); ++i) {
        const auto& b = base_stations[i];
        const auto path = "/base_stations/" + std::to_string(i);
        if (!cells.insert(b.cell_id).second) fail(path + "/cell_id", "duplicate cell id");
        if (!names.insert(b.name).second) fail(path + "/name", "duplicate entity name");
        if (!(b.coverage_m > 0)) fail(path + "/coverage_m", "must be positive");
    }
    for (std::size_t i = 0; i < ues.size(); ++i) {
        const auto& u = ues[i];
        const auto path = "/ues/" + std::to_string(i);
        if (!names.insert(u.name).second) fail(path + "/name", "duplicate entity name");
        try {
            u.thresholds.validate();
        } catch (const Error& e) {
            fail(path, e.what());
        }
        if (!(u.location_noise_m >= 0)) fail(path + "/location_noise_m", "must be non-negative");
        if (!channels.contains(u.channel)) fail(path + "/channel", "unknown channel '" + u.channel + "'");
    }
    for (std::size_t i = 0; i < attackers.size(); ++i) {
        const auto& a = attackers[i];
        const auto path = "/attackers/" + std::to_string(i);
        if (!names.insert(a.name).second) fail(path + "/name", "duplicate entity name");
        if (!(a.delay_s >= 0)) fail(path + "/delay_s", "must be non-negative");
        if (!(a.coverage_m > 0)) fail(path + "/coverage_m", "must be positive");
        if (a.mode == AttackMode::kNewBs) {
            if (cells.contains(a.fabricated_cell)) {
                fail(path + "/fabricated_cell", "fabricated cell id is registered");
            }
            continue;
        }
        const CellId target = a.target_cell.value_or(base_stations.front().cell_id);
        auto bs = std::find_if(base_stations.begin(), base_stations.end(),
                               [&](const auto& b) { return b.cell_id == target; });
        if (bs == base_stations.end()) fail(path + "/target_cell", "no base station with that cell id");
        const GeoPoint capture = a.mode == AttackMode::kWormhole
                                     ? a.capture_location.value_or(bs->location)
                                     : a.capture_location.value_or(a.location);
        if (distance(capture, bs->location) > bs->coverage_m) {
            fail(path + "/capture", "capture point is outside the target's coverage");
        }
        if (a.mode == AttackMode::kWormhole && capture == a.location) {
            fail(path, "wormhole capture and replay locations must differ");
        }
    }
}

// ---------------------------------------------------------------------------
// Scenario execution
// ---------------------------------------------------------------------------

namespace {

constexpr double kSpeedOfLight = 299'792'458.0;

struct BsState {
    const BaseStationConfig* cfg = nullptr;
    crypto::KeyPair keys;
    rrc::SotaCredentials sota;
};

struct UeState {
    const UeConfig* cfg = nullptr;
    Ledger ledger;
    std::optional<mfa::ReplayGuard> guard;
};

struct Transmission {
    double time = 0.0;  // seconds since start_time
    std::uint64_t seq = 0;
    std::string transmitter;
    std::string origin;
    GeoPoint location;
    double tx_power_dbm = 0.0;
    double coverage_m = 0.0;
    std::optional<rrc::SignedSib1> ours;
    std::optional<rrc::SotaSib1> sota;
};

struct Later {
    bool operator()(const Transmission& a, const Transmission& b) const {
        return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
};

std::uint32_t stamp(std::int64_t start, double offset) {
    return static_cast<std::uint32_t>(start + static_cast<std::int64_t>(std::floor(offset)));
}

rrc::Sib1Payload forge_payload(const rrc::Sib1Payload& p) {
    Bytes fields = p.base_fields();
    if (fields.size() > rrc::kCellIdentityBytes) {
        fields.back() ^= 0x01;
    } else {
        fields.push_back(0x00);
    }
    return rrc::Sib1Payload::from_bytes(fields);
}

// A copy of the honest chain whose registered locations have been moved
// without re-signing: what a hostile third party would have to deliver to
// make a relayed frame look local.
Ledger tamper_copy(const Ledger& honest) {
    std::vector<Block> blocks(honest.blocks().begin(), honest.blocks().end());
    for (std::size_t h = 1; h < blocks.size(); ++h) {
        auto& loc = blocks[h].payload.body.location;
        loc.latitude = std::clamp(loc.latitude + 0.1, -90.0, 90.0);
    }
    if (blocks.size() == 1) blocks[0].timestamp += 1;
    return Ledger::from_blocks(std::move(blocks), honest.policy());
}

class TrialRunner {
public:
    TrialRunner(const ScenarioConfig& cfg, std::uint32_t trial, ScenarioReport& report)
        : cfg_(cfg), trial_(trial), report_(report) {
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                          trial};
        rng_.seed(seq);
    }

    void run() {
        setup_core();
        setup_ues();
        schedule_broadcasts();
        while (!queue_.empty()) {
            Transmission tx = queue_.top();
            queue_.pop();
            deliver(tx);
        }
    }

private:
    std::uint64_t key_seed() { return rng_(); }

    void setup_core() {
        const std::int64_t t0 = cfg_.start_time;
        const Validity validity{t0 - 86400, t0 + 365 * 86400};
        auto core = crypto::generate_keypair(cfg_.core_suite, key_seed());
        CertificateIssuer issuer(cfg_.issuer_id, core);
        ledger_ = Ledger::create_genesis(core, issuer.self_certificate(validity), t0 - 86400);
        core_public_ = core.public_key;

        std::vector<BaseStationCertificate> certs;
        for (const auto& b : cfg_.base_stations) {
            BsState s;
            s.cfg = &b;
            s.keys = crypto::generate_keypair(b.suite, key_seed());
            certs.push_back(issuer.sign_csr(build_csr(b.cell_id, s.keys, b.location, validity, b.suite)));
            bs_.push_back(std::move(s));
        }
        ledger_ = ledger_.append_all(certs, core.private_key, t0 - 3600);

        // Certificate-chain material: one root and one intermediary per suite.
        for (auto& s : bs_) {
            const auto suite = s.cfg->suite;
            if (!sota_roots_.contains(suite)) {
                sota_roots_.emplace(suite, crypto::generate_keypair(suite, key_seed()));
                sota_intermediaries_.emplace(suite, crypto::generate_keypair(suite, key_seed()));
            }
            s.sota = rrc::issue_sota_credentials(sota_roots_.at(suite).private_key,
                                                 sota_intermediaries_.at(suite).private_key,
                                                 s.keys.public_key, s.cfg->cell_id);
        }
        for (const auto& a : cfg_.attackers) {
            attacker_keys_.push_back(crypto::generate_keypair(a.suite, key_seed()));
        }
    }

    void setup_ues() {
        const Ledger tampered = tamper_copy(ledger_);
        for (const auto& u : cfg_.ues) {
            UeState s;
            s.cfg = &u;
            const auto& channel = cfg_.channel(u.channel);
            auto sync = offline_sync(Ledger{}, core_public_, u.tampered_delivery ? tampered : ledger_,
                                     channel, rng_);
            s.ledger = sync.ledger;
            if (u.strict_nonce) s.guard.emplace(u.thresholds.tau_t_s);
            report_.syncs.push_back({trial_, u.name, channel.name, sync.accepted,
                                     sync.latency_s * 1e3, sync.reason});
            ues_.push_back(std::move(s));
        }
    }

    void push(Transmission tx) {
        tx.seq = seq_++;
        queue_.push(std::move(tx));
    }

    void schedule_broadcasts() {
        for (std::uint32_t round = 0; round < cfg_.broadcasts; ++round) {
            const double round_start = round * cfg_.sib1_period_s;
            for (std::size_t i = 0; i < bs_.size(); ++i) {
                broadcast(i, round_start + 0.001 * static_cast<double>(i));
            }
            for (std::size_t a = 0; a < cfg_.attackers.size(); ++a) {
                if (cfg_.attackers[a].mode == AttackMode::kNewBs) {
                    fabricate(a, round_start + 0.002);
                }
            }
        }
    }

    void broadcast(std::size_t index, double at) {
        const auto& s = bs_[index];
        const auto payload = rrc::Sib1Payload::synthetic(s.cfg->cell_id, cfg_.base_size,
                                                         cfg_.seed + trial_);
        const auto nonce = static_cast<std::uint32_t>(rng_());
        const auto t = stamp(cfg_.start_time, at);

        Transmission tx;
        tx.time = at;
        tx.transmitter = s.cfg->name;
        tx.origin = "legit";
        tx.location = s.cfg->location;
        tx.tx_power_dbm = s.cfg->tx_power_dbm;
        tx.coverage_m = s.cfg->coverage_m;
        tx.ours = rrc::sign_sib1(s.keys.private_key, payload, nonce, t);
        tx.sota = rrc::sign_sota_sib1(s.keys.private_key, s.sota, payload, nonce, t);

        for (std::size_t a = 0; a < cfg_.attackers.size(); ++a) {
            const auto& at_cfg = cfg_.attackers[a];
            if (at_cfg.mode == AttackMode::kNewBs) continue;
            if (at_cfg.target_cell.value_or(bs_.front().cfg->cell_id) != s.cfg->cell_id) continue;
            react(a, tx);
        }
        push(std::move(tx));
    }

    Transmission attacker_tx(std::size_t a, double at) const {
        const auto& c = cfg_.attackers[a];
        Transmission tx;
        tx.time = at;
        tx.transmitter = c.name;
        tx.origin = to_string(c.mode);
        tx.location = c.location;
        tx.tx_power_dbm = c.tx_power_dbm;
        tx.coverage_m = c.coverage_m;
        return tx;
    }

    // Reaction of a capturing attacker to one legitimate broadcast.
    void react(std::size_t a, const Transmission& captured) {
        const auto& c = cfg_.attackers[a];
        const auto& key = attacker_keys_[a].private_key;
        Transmission tx = attacker_tx(a, captured.time + c.delay_s);
        const auto& ours = *captured.ours;
        const auto& sota = *captured.sota;

        switch (c.mode) {
            case AttackMode::kReplay:
            case AttackMode::kWormhole:
                tx.ours = ours;
                tx.sota = sota;
                break;
            case AttackMode::kSpoofForge: {
                auto forged = ours;
                forged.payload = forge_payload(ours.payload);
                tx.ours = forged;
                auto forged_sota = sota;
                forged_sota.payload = forged.payload;
                tx.sota = forged_sota;
                break;
            }
            case AttackMode::kSpoofResign: {
                const auto t = stamp(cfg_.start_time, tx.time);
                const auto nonce = static_cast<std::uint32_t>(rng_());
                tx.ours = rrc::sign_sib1(key, ours.payload, nonce, t);
                auto resigned = sota;
                resigned.nonce = nonce;
                resigned.timestamp = t;
                resigned.bs_public_key = attacker_keys_[a].public_key;
                resigned.chain_signatures[2] =
                    crypto::sign(key, rrc::signing_bytes(sota.payload, nonce, t));
                tx.sota = resigned;
                break;
            }
            case AttackMode::kNewBs:
                return;
        }
        push(std::move(tx));
    }

    // A rogue station announcing an unregistered cell under its own key; its
    // certificate chain is self-made.
    void fabricate(std::size_t a, double at) {
        const auto& c = cfg_.attackers[a];
        const auto& keys = attacker_keys_[a];
        Transmission tx = attacker_tx(a, at);
        const auto payload = rrc::Sib1Payload::synthetic(c.fabricated_cell, cfg_.base_size, trial_);
        const auto nonce = static_cast<std::uint32_t>(rng_());
        const auto t = stamp(cfg_.start_time, at);
        tx.ours = rrc::sign_sib1(keys.private_key, payload, nonce, t);
        const auto creds = rrc::issue_sota_credentials(keys.private_key, keys.private_key,
                                                       keys.public_key, c.fabricated_cell);
        tx.sota = rrc::sign_sota_sib1(keys.private_key, creds, payload, nonce, t);
        push(std::move(tx));
    }

    GeoPoint sense_location(const UeConfig& u) {
        if (u.location_noise_m <= 0) return u.location;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double bearing = 360.0 * unit(rng_);
        const double radius = u.location_noise_m * std::sqrt(unit(rng_));
        return destination(u.location, bearing, radius);
    }

    void deliver(const Transmission& tx) {
        for (auto& ue : ues_) {
            const auto& u = *ue.cfg;
            const double d = distance(tx.location, u.location);
            if (d > tx.coverage_m) continue;
            const bool ours = u.scheme == rrc::Scheme::kOurs;
            if ((ours && !tx.ours) || (!ours && !tx.sota)) continue;

            const double rx = tx.time + d / kSpeedOfLight;
            const mfa::SensedContext ctx{sense_location(u),
                                         static_cast<double>(cfg_.start_time) + rx + u.clock_offset_s};
            Reception r;
            r.trial = trial_;
            r.ue = u.name;
            r.scheme = u.scheme;
            r.transmitter = tx.transmitter;
            r.origin = tx.origin;
            r.window = static_cast<std::uint32_t>(std::floor(rx / cfg_.sib1_period_s));
            r.rx_time = rx;
            r.signal = tx.tx_power_dbm - 20.0 * std::log10(std::max(d, 1.0));
            if (ours) {
                r.cell_id = tx.ours->payload.cell_id();
                const mfa::AuthOptions opts{u.metric};
                r.result = ue.guard
                               ? mfa::authenticate_strict(*ue.guard, ue.ledger, *tx.ours, ctx,
                                                          u.thresholds, opts)
                               : mfa::authenticate(ue.ledger, *tx.ours, ctx, u.thresholds, opts);
            } else {
                r.cell_id = tx.sota->payload.cell_id();
                auto root = sota_roots_.find(tx.sota->bs_public_key.suite());
                if (root == sota_roots_.end()) {
                    r.result.failed_factor = mfa::FailedFactor::kSignatureFail;
                } else {
                    r.result = mfa::sota_authenticate(root->second.public_key, *tx.sota, ctx.time,
                                                      u.thresholds.tau_t_s);
                }
            }
            report_.receptions.push_back(std::move(r));
        }
    }

    const ScenarioConfig& cfg_;
    std::uint32_t trial_;
    ScenarioReport& report_;
    std::mt19937_64 rng_;
    std::uint64_t seq_ = 0;
    Ledger ledger_;
    crypto::PublicKey core_public_;
    std::vector<BsState> bs_;
    std::vector<UeState> ues_;
    std::vector<crypto::KeyPair> attacker_keys_;
    std::map<crypto::SuiteId, crypto::KeyPair> sota_roots_;
    std::map<crypto::SuiteId, crypto::KeyPair> sota_intermediaries_;
    std::priority_queue<Transmission, std::vector<Transmission>, Later> queue_;
};

void select_attachments(ScenarioReport& report, std::size_t first) {
    std::map<std::tuple<std::uint32_t, std::string, std::uint32_t>, std::vector<const Reception*>> windows;
    for (std::size_t i = first; i < report.receptions.size(); ++i) {
        const auto& r = report.receptions[i];
        windows[{r.trial, r.ue, r.window}].push_back(&r);
    }
    for (auto& [key, list] : windows) {
        std::stable_sort(list.begin(), list.end(), [](const Reception* a, const Reception* b) {
            return a->signal > b->signal;
        });
        Attachment at{std::get<0>(key), std::get<1>(key), std::get<2>(key), {}, {}};
        for (const auto* r : list) {
            if (r->result.authenticated) {
                at.transmitter = r->transmitter;
                at.origin = r->origin;
                break;
            }
        }
        report.attachments.push_back(std::move(at));
    }
}

std::string fmt_rate(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

void aggregate(ScenarioReport& report, const ScenarioConfig& cfg) {
    for (const auto& r : report.receptions) {
        auto& counts = report.outcomes[r.scheme][r.origin];
        ++counts.frames;
        if (r.result.authenticated) {
            ++counts.accepted;
        } else {
            ++counts.failed_factors[mfa::to_string(r.result.failed_factor)];
        }
        auto& cost = report.costs[r.scheme];
        cost.signature_verifications += static_cast<std::uint64_t>(r.result.signature_verifications);
        if (r.result.authenticated) {
            ++cost.accepted_frames;
            cost.accepted_frame_verifications +=
                static_cast<std::uint64_t>(r.result.signature_verifications);
        }
    }
    for (auto& [scheme, cost] : report.costs) {
        if (cost.accepted_frames == 0) continue;
        cost.verifications_per_accepted_frame =
            static_cast<double>(cost.accepted_frame_verifications) /
            static_cast<double>(cost.accepted_frames);
        cost.modeled_verification_ms =
            cost.verifications_per_accepted_frame * cfg.cost.signature_verification_ms;
        cost.modeled_energy_mj = cfg.cost.energy_mj(cost.modeled_verification_ms);
    }
    report.rrc_setup_ms = cfg.rrc_phases.setup_ms(cfg.channel_quality);
    report.verification_fraction_of_rrc = cfg.cost.signature_verification_ms / report.rrc_setup_ms;
    auto ours = report.costs.find(rrc::Scheme::kOurs);
    auto sota = report.costs.find(rrc::Scheme::kSota);
    if (ours != report.costs.end() && sota != report.costs.end() &&
        ours->second.accepted_frames > 0 && sota->second.accepted_frames > 0) {
        report.modeled_time_ratio =
            sota->second.modeled_verification_ms / ours->second.modeled_verification_ms;
        report.modeled_energy_ratio =
            sota->second.modeled_energy_mj / ours->second.modeled_energy_mj;
    }

    auto check_rate = [&](const std::string& name, const OutcomeCounts& c, double actual,
                          double required) {
        AssertionResult a;
        a.name = name;
        a.expected = ">= " + fmt_rate(required);
        a.actual = c.frames == 0 ? "no frames" : fmt_rate(actual);
        a.pass = c.frames > 0 && actual >= required;
        report.assertions.push_back(std::move(a));
    };
    for (const auto& [s, req] : cfg.expect.legit_acceptance) {
        const auto c = report.legit(s);
        check_rate(std::string(rrc::to_string(s)) + " legit acceptance", c, c.acceptance_rate(), req);
    }
    for (const auto& [s, req] : cfg.expect.attack_rejection) {
        const auto c = report.attack(s);
        check_rate(std::string(rrc::to_string(s)) + " attack rejection", c, c.rejection_rate(), req);
    }
    for (const auto& [s, req] : cfg.expect.attack_acceptance) {
        const auto c = report.attack(s);
        check_rate(std::string(rrc::to_string(s)) + " attack acceptance", c, c.acceptance_rate(), req);
    }
    for (const auto& [s, factor] : cfg.expect.attack_failed_factor) {
        const auto c = report.attack(s);
        AssertionResult a;
        a.name = std::string(rrc::to_string(s)) + " attack failed factor";
        a.expected = mfa::to_string(factor);
        std::string seen;
        for (const auto& [f, n] : c.failed_factors) {
            seen += (seen.empty() ? "" : ",") + f + "=" + std::to_string(n);
        }
        a.actual = c.rejected() == 0 ? "no rejections" : seen;
        a.pass = c.rejected() > 0 && c.failed_factors.size() == 1 &&
                 c.failed_factors.begin()->first == mfa::to_string(factor);
        report.assertions.push_back(std::move(a));
    }
}

ordered_json to_json(const OutcomeCounts& c) {
    ordered_json j;
    j["frames"] = c.frames;
    j["accepted"] = c.accepted;
    j["rejected"] = c.rejected();
    ordered_json f = ordered_json::object();
    for (const auto& [k, v] : c.failed_factors) f[k] = v;
    j["failed_factors"] = f;
    return j;
}

ordered_json auth_json(const mfa::AuthResult& r) {
    ordered_json j;
    j["A"] = r.authenticated;
    j["failed_factor"] = mfa::to_string(r.failed_factor);
    j["d_meters"] = r.distance_m ? ordered_json(*r.distance_m) : ordered_json(nullptr);
    j["delta_t_seconds"] = r.delta_t_s ? ordered_json(*r.delta_t_s) : ordered_json(nullptr);
    j["signature_verifications"] = r.signature_verifications;
    return j;
}

}  // namespace

double OutcomeCounts::acceptance_rate() const {
    return frames == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(frames);
}

double OutcomeCounts::rejection_rate() const {
    return frames == 0 ? 0.0 : static_cast<double>(rejected()) / static_cast<double>(frames);
}

OutcomeCounts ScenarioReport::legit(rrc::Scheme s) const {
    OutcomeCounts out;
    auto it = outcomes.find(s);
    if (it == outcomes.end()) return out;
    if (auto l = it->second.find("legit"); l != it->second.end()) out = l->second;
    return out;
}

OutcomeCounts ScenarioReport::attack(rrc::Scheme s) const {
    OutcomeCounts out;
    auto it = outcomes.find(s);
    if (it == outcomes.end()) return out;
    for (const auto& [origin, c] : it->second) {
        if (origin == "legit") continue;
        out.frames += c.frames;
        out.accepted += c.accepted;
        for (const auto& [f, n] : c.failed_factors) out.failed_factors[f] += n;
    }
    return out;
}

bool ScenarioReport::assertions_pass() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const auto& a) { return a.pass; });
}

std::string ScenarioReport::to_json() const {
    ordered_json j;
    j["scenario"] = name;
    j["seed"] = seed;
    j["trials"] = trials;

    ordered_json out = ordered_json::object();
    for (const auto& [scheme, by_origin] : outcomes) {
        ordered_json s = ordered_json::object();
        for (const auto& [origin, c] : by_origin) s[origin] = sim::to_json(c);
        out[rrc::to_string(scheme)] = s;
    }
    j["outcomes"] = out;

    ordered_json costs_j = ordered_json::object();
    for (const auto& [scheme, c] : costs) {
        costs_j[rrc::to_string(scheme)] = {
            {"accepted_frames", c.accepted_frames},
            {"signature_verifications", c.signature_verifications},
            {"verifications_per_accepted_frame", c.verifications_per_accepted_frame},
            {"modeled_verification_ms", c.modeled_verification_ms},
            {"modeled_energy_mj", c.modeled_energy_mj},
        };
    }
    j["verification_costs"] = costs_j;
    j["modeled_time_ratio"] = modeled_time_ratio;
    j["modeled_energy_ratio"] = modeled_energy_ratio;
    j["rrc_setup_ms"] = rrc_setup_ms;
    j["verification_fraction_of_rrc"] = verification_fraction_of_rrc;

    ordered_json syncs_j = ordered_json::array();
    for (const auto& s : syncs) {
        syncs_j.push_back({{"trial", s.trial},
                           {"ue", s.ue},
                           {"channel", s.channel},
                           {"accepted", s.accepted},
                           {"latency_ms", s.latency_ms},
                           {"reason", s.reason}});
    }
    j["offline_sync"] = syncs_j;

    ordered_json att = ordered_json::array();
    for (const auto& a : attachments) {
        att.push_back({{"trial", a.trial},
                       {"ue", a.ue},
                       {"window", a.window},
                       {"attached_to", a.transmitter.empty() ? ordered_json(nullptr) : ordered_json(a.transmitter)},
                       {"origin", a.origin.empty() ? ordered_json(nullptr) : ordered_json(a.origin)}});
    }
    j["attachments"] = att;

    ordered_json frames = ordered_json::array();
    for (const auto& r : receptions) {
        frames.push_back({{"trial", r.trial},
                          {"ue", r.ue},
                          {"scheme", rrc::to_string(r.scheme)},
                          {"transmitter", r.transmitter},
                          {"origin", r.origin},
                          {"cell_id", r.cell_id.value},
                          {"window", r.window},
                          {"rx_time_s", r.rx_time},
                          {"signal", r.signal},
                          {"result", auth_json(r.result)}});
    }
    j["frames"] = frames;

    ordered_json asserts = ordered_json::array();
    for (const auto& a : assertions) {
        asserts.push_back(
            {{"name", a.name}, {"expected", a.expected}, {"actual", a.actual}, {"pass", a.pass}});
    }
    j["assertions"] = asserts;
    j["assertions_pass"] = assertions_pass();
    return j.dump(2) + "\n";
}

std::string ScenarioReport::summary_csv() const {
    std::ostringstream out;
    out << "scheme,origin,frames,accepted,rejected,failed_factors\n";
    for (const auto& [scheme, by_origin] : outcomes) {
        for (const auto& [origin, c] : by_origin) {
            std::string f;
            for (const auto& [k, v] : c.failed_factors) {
                f += (f.empty() ? "" : ";") + k + "=" + std::to_string(v);
            }
            out << rrc::to_string(scheme) << ',' << origin << ',' << c.frames << ',' << c.accepted
                << ',' << c.rejected() << ',' << f << '\n';
        }
    }
    return out.str();
}

ScenarioReport run_scenario(const ScenarioConfig& config) {
    config.validate();
    ScenarioReport report;
    report.name = config.name;
    report.seed = config.seed;
    report.trials = config.trials;

    const bool keep_frames = config.record_frames || config.trials == 1;
    for (std::uint32_t trial = 0; trial < config.trials; ++trial) {
        const std::size_t first = report.receptions.size();
        TrialRunner(config, trial, report).run();
        select_attachments(report, first);
    }
    aggregate(report, config);
    if (!keep_frames) report.receptions.clear();
    return report;
}

// ---------------------------------------------------------------------------
// Benchmark
// ---------------------------------------------------------------------------

namespace {

TimingStats summarize(std::vector<double> samples_ms, int verifications) {
    TimingStats s;
    s.verifications_per_frame = verifications;
    s.samples = samples_ms.size();
    if (samples_ms.empty()) return s;
    const double n = static_cast<double>(samples_ms.size());
    s.mean_ms = std::accumulate(samples_ms.begin(), samples_ms.end(), 0.0) / n;
    double var = 0.0;
    for (double x : samples_ms) var += (x - s.mean_ms) * (x - s.mean_ms);
    s.stddev_ms = samples_ms.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    s.ci95_ms = 1.96 * s.stddev_ms / std::sqrt(n);
    std::sort(samples_ms.begin(), samples_ms.end());
    const std::size_t mid = samples_ms.size() / 2;
    s.median_ms = samples_ms.size() % 2 ? samples_ms[mid]
                                        : 0.5 * (samples_ms[mid - 1] + samples_ms[mid]);
    return s;
}

ordered_json to_json(const TimingStats& t) {
    return {{"verifications_per_frame", t.verifications_per_frame},
            {"samples", t.samples},
            {"mean_ms", t.mean_ms},
            {"stddev_ms", t.stddev_ms},
            {"ci95_ms", t.ci95_ms},
            {"median_ms", t.median_ms}};
}

}  // namespace

std::string BenchReport::to_json() const {
    ordered_json j;
    j["suite"] = crypto::suite_info(suite).name;
    j["iterations"] = iterations;
    j["ours"] = sim::to_json(ours);
    j["sota"] = sim::to_json(sota);
    j["time_ratio"] = time_ratio;
    j["power_w"] = power_w;
    j["ours_energy_mj"] = ours_energy_mj;
    j["sota_energy_mj"] = sota_energy_mj;
    j["energy_ratio"] = energy_ratio;
    return j.dump(2) + "\n";
}

BenchReport benchmark_verification(crypto::SuiteId suite, std::size_t iterations,
                                   const CostModel& cost) {
    if (iterations < 100) {
        throw Error(ErrorCode::kInvalidArgument, "benchmark needs at least 100 iterations");
    }
    const auto root = crypto::generate_keypair(suite, 1);
    const auto intermediary = crypto::generate_keypair(suite, 2);
    const auto bs = crypto::generate_keypair(suite, 3);
    const CellId cell{0x1A2B3C};
    const auto creds =
        rrc::issue_sota_credentials(root.private_key, intermediary.private_key, bs.public_key, cell);
    const auto payload = rrc::Sib1Payload::synthetic(cell, rrc::kDefaultBaseSize, 7);
    const std::uint32_t t = 1'760'000'000;
    const auto ours_frame = rrc::sign_sib1(bs.private_key, payload, 42, t);
    const auto sota_frame = rrc::sign_sota_sib1(bs.private_key, creds, payload, 42, t);

    using Clock = std::chrono::steady_clock;
    auto time_ours = [&] {
        const auto start = Clock::now();
        const bool ok = rrc::verify_sib1(bs.public_key, ours_frame);
        const auto stop = Clock::now();
        if (!ok) throw Error(ErrorCode::kInvalidArgument, "benchmark frame failed to verify");
        return std::chrono::duration<double, std::milli>(stop - start).count();
    };
    int sota_verifications = 0;
    auto time_sota = [&] {
        const auto start = Clock::now();
        const auto r = mfa::sota_authenticate(root.public_key, sota_frame, t, 1.0);
        const auto stop = Clock::now();
        if (!r.authenticated) {
            throw Error(ErrorCode::kInvalidArgument, "benchmark chain frame failed to verify");
        }
        sota_verifications = r.signature_verifications;
        return std::chrono::duration<double, std::milli>(stop - start).count();
    };

    for (int i = 0; i < 20; ++i) {
        time_ours();
        time_sota();
    }
    std::vector<double> ours_ms;
    std::vector<double> sota_ms;
    ours_ms.reserve(iterations);
    sota_ms.reserve(iterations);
    for (std::size_t i = 0; i < iterations; ++i) {
        // Alternate the order so drift affects both schemes equally.
        if (i % 2 == 0) {
            ours_ms.push_back(time_ours());
            sota_ms.push_back(time_sota());
        } else {
            sota_ms.push_back(time_sota());
            ours_ms.push_back(time_ours());
        }
    }

    BenchReport r;
    r.suite = suite;
    r.iterations = iterations;
    r.ours = summarize(std::move(ours_ms), 1);
    r.sota = summarize(std::move(sota_ms), sota_verifications);
    r.time_ratio = r.sota.mean_ms / r.ours.mean_ms;
    r.power_w = cost.power_w;
    r.ours_energy_mj = cost.energy_mj(r.ours.mean_ms);
    r.sota_energy_mj = cost.energy_mj(r.sota.mean_ms);
    r.energy_ratio = r.sota_energy_mj / r.ours_energy_mj;
    return r;
}

}  // namespace bsauth::sim
