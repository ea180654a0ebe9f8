#include <fstream>
#include <set>
#include <sstream>
#include <json.hpp>

#include "bsauth/error.hpp"
#include "bsauth/sim.hpp"

namespace bsauth::sim {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::kConfig, path + ": " + what);
}

// Strict object reader: every key must be consumed, so typos surface as
// errors rather than silently falling back to defaults.
class Fields {
public:
    Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) config_error(path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    std::string path(const std::string& key) const { return path_ + "/" + key; }

    const json& raw(const std::string& key) {
        used_.insert(key);
        return j_.at(key);
    }

    template <typename T>
    T get(const std::string& key, T fallback) {
        if (!has(key)) return fallback;
        return as<T>(raw(key), path(key));
    }

    template <typename T>
    T require(const std::string& key) {
        if (!has(key)) config_error(path(key), "required field missing");
        return as<T>(raw(key), path(key));
    }

    void finish() const {
        for (const auto& [k, _] : j_.items()) {
            if (!used_.contains(k)) config_error(path(k), "unknown field");
        }
    }

    template <typename T>
    static T as(const json& v, const std::string& where) {
        try {
            if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number()) config_error(where, "expected a number");
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) config_error(where, "expected true or false");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) config_error(where, "expected a string");
            } else if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer()) config_error(where, "expected an integer");
                if (std::is_unsigned_v<T> && v.is_number_integer() && !v.is_number_unsigned()) {
                    config_error(where, "expected a non-negative integer");
                }
            }
            return v.get<T>();
        } catch (const json::exception& e) {
            config_error(where, e.what());
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

template <typename Fn>
auto wrap(const std::string& where, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::kConfig) throw;
        config_error(where, e.what());
    }
}

CellId cell_from(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) {
        CellId id{v.get<std::uint64_t>()};
        if (!id.valid()) config_error(where, "cell id exceeds 36 bits");
        return id;
    }
    if (v.is_string()) return wrap(where, [&] { return parse_cell_id(v.get<std::string>()); });
    config_error(where, "expected a cell id (integer or string)");
}

GeoPoint point_from(Fields& f) {
    GeoPoint p{f.require<double>("latitude"), f.require<double>("longitude")};
    if (!p.valid()) config_error(f.path("latitude"), "coordinate outside WGS84 bounds");
    return p;
}

crypto::SuiteId suite_from(Fields& f, const std::string& key, crypto::SuiteId fallback) {
    if (!f.has(key)) return fallback;
    const auto name = f.require<std::string>(key);
    return wrap(f.path(key), [&] { return crypto::parse_suite(name); });
}

rrc::Scheme scheme_key(const std::string& key, const std::string& where) {
    return wrap(where, [&] { return rrc::parse_scheme(key); });
}

std::map<rrc::Scheme, double> rate_map(const json& j, const std::string& where) {
    if (!j.is_object()) config_error(where, "expected an object keyed by scheme");
    std::map<rrc::Scheme, double> out;
    for (const auto& [k, v] : j.items()) {
        const double r = Fields::as<double>(v, where + "/" + k);
        if (r < 0 || r > 1) config_error(where + "/" + k, "rate must lie in [0, 1]");
        out[scheme_key(k, where + "/" + k)] = r;
    }
    return out;
}

mfa::FailedFactor parse_factor(const std::string& s, const std::string& where) {
    for (auto f : {mfa::FailedFactor::kNone, mfa::FailedFactor::kIdNotFound,
                   mfa::FailedFactor::kLocationFail, mfa::FailedFactor::kTimeFail,
                   mfa::FailedFactor::kSignatureFail}) {
        if (s == mfa::to_string(f)) return f;
    }
    config_error(where, "unknown failed_factor '" + s + "'");
}

ChannelKind parse_kind(const std::string& s, const std::string& where) {
    for (auto k : {ChannelKind::kAdhocWifi, ChannelKind::kAdhocBluetooth, ChannelKind::kCloudTcp}) {
        if (s == to_string(k)) return k;
    }
    config_error(where, "unknown channel kind '" + s + "'");
}

DeliverySource parse_source(const std::string& s, const std::string& where) {
    for (auto k : {DeliverySource::kThirdParty, DeliverySource::kCloud}) {
        if (s == to_string(k)) return k;
    }
    config_error(where, "unknown delivery source '" + s + "'");
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kConfig, std::string("malformed JSON: ") + e.what());
    }

    ScenarioConfig c;
    Fields top(root, "");
    c.name = top.get<std::string>("name", c.name);
    c.seed = top.get<std::uint64_t>("seed", c.seed);
    c.trials = top.get<std::uint32_t>("trials", c.trials);
    c.start_time = top.get<std::int64_t>("start_time", c.start_time);
    c.broadcasts = top.get<std::uint32_t>("broadcasts", c.broadcasts);
    c.sib1_period_s = top.get<double>("sib1_period_s", c.sib1_period_s);
    c.base_size = top.get<std::size_t>("base_size", c.base_size);
    c.record_frames = top.get<bool>("record_frames", c.record_frames);

    if (top.has("core")) {
        Fields f(top.raw("core"), "/core");
        c.issuer_id = f.get<std::string>("issuer_id", c.issuer_id);
        c.core_suite = suite_from(f, "suite", c.core_suite);
        f.finish();
    }

    for (const auto& p : default_channel_profiles()) c.channels[p.name] = p;
    if (top.has("channels")) {
        const auto& chans = top.raw("channels");
        if (!chans.is_object()) config_error("/channels", "expected an object keyed by name");
        for (const auto& [name, body] : chans.items()) {
            Fields f(body, "/channels/" + name);
            ChannelProfile p = c.channels.contains(name) ? c.channels[name] : ChannelProfile{};
            p.name = name;
            if (f.has("kind")) p.kind = parse_kind(f.require<std::string>("kind"), f.path("kind"));
            if (f.has("source")) {
                p.source = parse_source(f.require<std::string>("source"), f.path("source"));
            }
            p.latency_mean_s = f.get<double>("latency_ms", p.latency_mean_s * 1e3) / 1e3;
            p.jitter_stddev_s = f.get<double>("jitter_ms", p.jitter_stddev_s * 1e3) / 1e3;
            f.finish();
            c.channels[name] = p;
        }
    }

    if (top.has("cost_model")) {
        Fields f(top.raw("cost_model"), "/cost_model");
        c.cost.signature_verification_ms =
            f.get<double>("signature_verification_ms", c.cost.signature_verification_ms);
        c.cost.factor_checks_ms = f.get<double>("factor_checks_ms", c.cost.factor_checks_ms);
        c.cost.power_w = f.get<double>("power_w", c.cost.power_w);
        f.finish();
    }
    if (top.has("rrc_phases_ms")) {
        Fields f(top.raw("rrc_phases_ms"), "/rrc_phases_ms");
        c.rrc_phases.good_ms = f.get<double>("good", c.rrc_phases.good_ms);
        c.rrc_phases.medium_ms = f.get<double>("medium", c.rrc_phases.medium_ms);
        c.rrc_phases.poor_ms = f.get<double>("poor", c.rrc_phases.poor_ms);
        f.finish();
    }
    if (top.has("channel_quality")) {
        const auto q = top.require<std::string>("channel_quality");
        c.channel_quality = wrap("/channel_quality", [&] { return parse_channel_quality(q); });
    }

    auto array = [&](const char* key) -> const json& {
        const auto& a = top.raw(key);
        if (!a.is_array()) config_error(std::string("/") + key, "expected an array");
        return a;
    };

    if (top.has("base_stations")) {
        const auto& a = array("base_stations");
        for (std::size_t i = 0; i < a.size(); ++i) {
            Fields f(a[i], "/base_stations/" + std::to_string(i));
            BaseStationConfig b;
            b.name = f.get<std::string>("name", "bs" + std::to_string(i));
            if (!f.has("cell_id")) config_error(f.path("cell_id"), "required field missing");
            b.cell_id = cell_from(f.raw("cell_id"), f.path("cell_id"));
            // Canonical micro-degree grid, so the certified L equals the site.
            b.location = point_from(f).quantized();
            b.suite = suite_from(f, "suite", b.suite);
            b.coverage_m = f.get<double>("coverage_m", b.coverage_m);
            b.tx_power_dbm = f.get<double>("tx_power_dbm", b.tx_power_dbm);
            f.finish();
            c.base_stations.push_back(b);
        }
    }

    if (top.has("ues")) {
        const auto& a = array("ues");
        for (std::size_t i = 0; i < a.size(); ++i) {
            Fields f(a[i], "/ues/" + std::to_string(i));
            UeConfig u;
            u.name = f.get<std::string>("name", "ue" + std::to_string(i));
            u.location = point_from(f);
            u.thresholds.tau_d_m = f.get<double>("tau_d_m", u.thresholds.tau_d_m);
            u.thresholds.tau_t_s = f.get<double>("tau_t_s", u.thresholds.tau_t_s);
            if (f.has("scheme")) {
                const auto s = f.require<std::string>("scheme");
                u.scheme = wrap(f.path("scheme"), [&] { return rrc::parse_scheme(s); });
            }
            if (f.has("metric")) {
                const auto m = f.require<std::string>("metric");
                u.metric = wrap(f.path("metric"), [&] { return parse_distance_metric(m.c_str()); });
            }
            u.location_noise_m = f.get<double>("location_noise_m", u.location_noise_m);
            u.clock_offset_s = f.get<double>("clock_offset_s", u.clock_offset_s);
            u.strict_nonce = f.get<bool>("strict_nonce", u.strict_nonce);
            u.channel = f.get<std::string>("channel", u.channel);
            u.tampered_delivery = f.get<bool>("tampered_delivery", u.tampered_delivery);
            f.finish();
            c.ues.push_back(u);
        }
    }

    if (top.has("attackers")) {
        const auto& a = array("attackers");
        for (std::size_t i = 0; i < a.size(); ++i) {
            Fields f(a[i], "/attackers/" + std::to_string(i));
            AttackerConfig at;
            at.name = f.get<std::string>("name", "attacker" + std::to_string(i));
            const auto mode = f.require<std::string>("mode");
            at.mode = wrap(f.path("mode"), [&] { return parse_attack_mode(mode); });
            if (f.has("target_cell")) at.target_cell = cell_from(f.raw("target_cell"), f.path("target_cell"));
            if (f.has("fabricated_cell")) {
                at.fabricated_cell = cell_from(f.raw("fabricated_cell"), f.path("fabricated_cell"));
            }
            at.location = point_from(f);
            if (f.has("capture")) {
                Fields cap(f.raw("capture"), f.path("capture"));
                at.capture_location = point_from(cap);
                cap.finish();
            }
            at.delay_s = f.get<double>("delay_s", at.delay_s);
            at.tx_power_dbm = f.get<double>("tx_power_dbm", at.tx_power_dbm);
            at.coverage_m = f.get<double>("coverage_m", at.coverage_m);
            at.suite = suite_from(f, "suite", at.suite);
            f.finish();
            c.attackers.push_back(at);
        }
    }

    if (top.has("expect")) {
        Fields f(top.raw("expect"), "/expect");
        if (f.has("legit_acceptance")) {
            c.expect.legit_acceptance = rate_map(f.raw("legit_acceptance"), f.path("legit_acceptance"));
        }
        if (f.has("attack_rejection")) {
            c.expect.attack_rejection = rate_map(f.raw("attack_rejection"), f.path("attack_rejection"));
        }
        if (f.has("attack_acceptance")) {
            c.expect.attack_acceptance =
                rate_map(f.raw("attack_acceptance"), f.path("attack_acceptance"));
        }
        if (f.has("attack_failed_factor")) {
            const auto& m = f.raw("attack_failed_factor");
            const auto where = f.path("attack_failed_factor");
            if (!m.is_object()) config_error(where, "expected an object keyed by scheme");
            for (const auto& [k, v] : m.items()) {
                const auto name = Fields::as<std::string>(v, where + "/" + k);
                c.expect.attack_failed_factor[scheme_key(k, where + "/" + k)] =
                    parse_factor(name, where + "/" + k);
            }
        }
        f.finish();
    }
    top.finish();

    c.validate();
    return c;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kIo, "cannot open scenario config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_config(ss.str());
}

}  // namespace bsauth::sim
