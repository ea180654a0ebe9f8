// bsauth: key, ledger, report, scenario and benchmark commands.
//
// Exit codes: 0 success, 1 scenario assertion or verification failure,
// 2 usage or validation error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bsauth/certificate.hpp"
#include "bsauth/crypto.hpp"
#include "bsauth/error.hpp"
#include "bsauth/fleet.hpp"
#include "bsauth/keyfile.hpp"
#include "bsauth/ledger.hpp"
#include "bsauth/rrc.hpp"
#include "bsauth/sim.hpp"

namespace fs = std::filesystem;
using namespace bsauth;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

// Relative output paths land under $BSAUTH_OUT_DIR when it is set.
fs::path output_path(const std::string& p) {
    fs::path path(p);
    if (path.is_absolute()) return path;
    if (const char* dir = std::getenv("BSAUTH_OUT_DIR"); dir && *dir) {
        fs::create_directories(dir);
        return fs::path(dir) / path;
    }
    return path;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

struct KeygenArgs {
    std::string suite = "ecdsa-224";
    std::string out;
    std::optional<std::uint64_t> seed;
    bool force = false;
};

int run_keygen(const KeygenArgs& a) {
    const auto suite = crypto::parse_suite(a.suite);
    const auto kp = crypto::generate_keypair(suite, a.seed);
    const auto path = output_path(a.out);
    save_keypair(kp, path, a.force);
    std::cout << "wrote " << crypto::suite_info(suite).name << " keypair to " << path.string() << "\n";
    return kExitOk;
}

struct LedgerBuildArgs {
    std::string fleet;
    std::string core;
    std::string out;
    std::string bs_suite = "ecdsa-224";
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> epoch;
    std::string issuer_id = "core-network";
    double validity_days = 730;
    std::string keys_out;
    bool force = false;
};

int run_ledger_build(const LedgerBuildArgs& a) {
    std::ifstream fleet_in(a.fleet);
    if (!fleet_in) throw Error(ErrorCode::kIo, "cannot open " + a.fleet);
    const auto fleet = parse_fleet_csv(fleet_in);
    for (const auto& w : fleet.warnings) std::cerr << "warning: " << w << "\n";

    const auto core = load_keypair(a.core);
    const auto bs_suite = crypto::parse_suite(a.bs_suite);
    const std::int64_t epoch =
        a.epoch.value_or(std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::system_clock::now().time_since_epoch())
                             .count());
    const Validity validity{epoch, epoch + static_cast<std::int64_t>(a.validity_days * 86400)};

    const auto out = output_path(a.out);
    if (!a.force && fs::exists(out)) {
        throw Error(ErrorCode::kIo, out.string() + " already exists (use --force to replace it)");
    }

    CertificateIssuer issuer(a.issuer_id, core);
    auto ledger = Ledger::create_genesis(core, issuer.self_certificate(validity), epoch);
    std::vector<BaseStationCertificate> certs;
    nlohmann::ordered_json keys = nlohmann::ordered_json::array();
    certs.reserve(fleet.records.size());
    for (std::size_t i = 0; i < fleet.records.size(); ++i) {
        const auto& r = fleet.records[i];
        std::optional<std::uint64_t> seed;
        if (a.seed) seed = *a.seed + i + 1;
        const auto kp = crypto::generate_keypair(bs_suite, seed);
        certs.push_back(issuer.sign_csr(build_csr(r.cell_id, kp, r.location, validity, bs_suite)));
        if (!a.keys_out.empty()) {
            auto k = nlohmann::ordered_json::parse(keypair_to_json(kp));
            keys.push_back({{"cell_id", r.cell_id.value},
                            {"suite", k["suite"]},
                            {"private", k["private"]},
                            {"public", k["public"]}});
        }
    }
    ledger = ledger.append_all(certs, core.private_key, epoch);
    if (auto v = ledger.verify_chain(core.public_key); !v) {
        std::cerr << "error: built ledger does not verify: " << v.reason << "\n";
        return kExitFailed;
    }
    save_ledger(ledger, out);
    if (!a.keys_out.empty()) write_text(output_path(a.keys_out), keys.dump(2) + "\n");

    const auto stats = ledger.measured_block_sizes();
    std::cout << "height " << ledger.height() << " (genesis + " << ledger.registered_cells()
              << " certificates)\n"
              << "block bytes min " << stats.min << " max " << stats.max << " mean "
              << fixed(stats.mean, 1) << " total " << stats.total << "\n"
              << "wrote " << out.string() << "\n";
    return kExitOk;
}

struct LedgerVerifyArgs {
    std::string ledger;
    std::string anchor;
};

int run_ledger_verify(const LedgerVerifyArgs& a) {
    std::optional<crypto::PublicKey> anchor;
    if (!a.anchor.empty()) anchor = load_keypair(a.anchor).public_key;
    try {
        const auto ledger = load_ledger(a.ledger, anchor);
        std::cout << "ok: height " << ledger.height() << ", " << ledger.registered_cells()
                  << " registered cells\n";
        return kExitOk;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::kChainVerification) throw;
        std::cout << "FAILED: " << e.what() << "\n";
        return kExitFailed;
    }
}

int run_report_sizes(std::size_t base_size, const std::string& format) {
    const auto rows = rrc::budget_table(base_size);
    if (format == "md") {
        std::cout << rrc::budget_table_markdown(rows);
    } else {
        std::cout << rrc::budget_table_csv(rows);
    }
    return kExitOk;
}

int run_report_scalability(double x, double y, double block_size) {
    const auto r = scalability(x, y, block_size);
    std::cout << "base_stations,lifespan_years,block_size,cert_rate,ledger_growth_bytes_per_s\n"
              << r.base_stations << ',' << r.lifespan_years << ',' << r.block_size << ','
              << fixed(r.cert_rate, 6) << ',' << fixed(r.ledger_growth, 4) << "\n";
    return kExitOk;
}

struct ScenarioArgs {
    std::string config;
    std::string out = "report.json";
    std::string csv;
};

int run_scenario_cmd(const ScenarioArgs& a) {
    const auto config = sim::load_scenario_config(a.config);
    const auto report = sim::run_scenario(config);
    const auto out = output_path(a.out);
    write_text(out, report.to_json());
    const auto csv = a.csv.empty() ? fs::path(out).replace_extension(".csv") : output_path(a.csv);
    write_text(csv, report.summary_csv());

    std::cout << report.summary_csv();
    for (const auto& as : report.assertions) {
        std::cout << (as.pass ? "PASS " : "FAIL ") << as.name << ": expected " << as.expected
                  << ", got " << as.actual << "\n";
    }
    std::cout << "wrote " << out.string() << " and " << csv.string() << "\n";
    return report.assertions_pass() ? kExitOk : kExitFailed;
}

int run_bench(const std::string& suite_name, std::size_t iters, const std::string& json_out) {
    const auto suite = crypto::parse_suite(suite_name);
    const auto r = sim::benchmark_verification(suite, iters);
    std::cout << "suite " << crypto::suite_info(suite).name << ", " << r.iterations
              << " iterations\n"
              << "ours: " << r.ours.verifications_per_frame << " verification(s)/frame, mean "
              << fixed(r.ours.mean_ms, 4) << " ms (95% CI +/- " << fixed(r.ours.ci95_ms, 4)
              << ")\n"
              << "sota: " << r.sota.verifications_per_frame << " verification(s)/frame, mean "
              << fixed(r.sota.mean_ms, 4) << " ms (95% CI +/- " << fixed(r.sota.ci95_ms, 4)
              << ")\n"
              << "time ratio " << fixed(r.time_ratio, 3) << ", energy ratio "
              << fixed(r.energy_ratio, 3) << " at " << r.power_w << " W\n";
    if (!json_out.empty()) write_text(output_path(json_out), r.to_json());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Base-station certificate tooling and attack simulator"};
    app.require_subcommand(1);
    int rc = kExitOk;

    KeygenArgs kg;
    auto* keygen = app.add_subcommand("keygen", "Generate a signing keypair");
    keygen->add_option("--suite", kg.suite, "ecdsa-224|256|384|521|571")->capture_default_str();
    keygen->add_option("--out", kg.out, "Key file to write")->required();
    keygen->add_option("--seed", kg.seed, "Derive the key deterministically from this seed");
    keygen->add_flag("--force", kg.force, "Replace an existing file");
    keygen->callback([&] { rc = run_keygen(kg); });

    auto* ledger = app.add_subcommand("ledger", "Build or verify a certificate ledger");
    ledger->require_subcommand(1);
    LedgerBuildArgs lb;
    auto* build = ledger->add_subcommand("build", "Certify every fleet row and write a ledger");
    build->add_option("--fleet", lb.fleet, "Fleet CSV (cell_id,latitude,longitude)")
        ->required()
        ->check(CLI::ExistingFile);
    build->add_option("--core", lb.core, "Core network key file")->required()->check(CLI::ExistingFile);
    build->add_option("--out", lb.out, "Ledger file to write")->required();
    build->add_option("--bs-suite", lb.bs_suite, "Suite for base-station keys")->capture_default_str();
    build->add_option("--seed", lb.seed, "Derive base-station keys deterministically");
    build->add_option("--epoch", lb.epoch, "Issuance time in Unix seconds (default: now)");
    build->add_option("--issuer", lb.issuer_id, "Issuer identifier")->capture_default_str();
    build->add_option("--validity-days", lb.validity_days, "Certificate lifetime")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    build->add_option("--keys-out", lb.keys_out, "Also write the base-station keys as JSON");
    build->add_flag("--force", lb.force, "Replace an existing ledger file");
    build->callback([&] { rc = run_ledger_build(lb); });

    LedgerVerifyArgs lv;
    auto* verify = ledger->add_subcommand("verify", "Re-verify every block of a ledger file");
    verify->add_option("ledger", lv.ledger, "Ledger file")->required()->check(CLI::ExistingFile);
    verify->add_option("--anchor", lv.anchor, "Core key file the genesis must publish")
        ->check(CLI::ExistingFile);
    verify->callback([&] { rc = run_ledger_verify(lv); });

    auto* report = app.add_subcommand("report", "Packet budget, scalability and suite tables");
    report->require_subcommand(1);
    std::size_t base_size = rrc::kDefaultBaseSize;
    std::string format = "csv";
    auto* sizes = report->add_subcommand("sizes", "SIB1 size per scheme and suite");
    sizes->add_option("--base-size", base_size, "Unsigned SIB1 bytes")
        ->capture_default_str()
        ->check(CLI::Range(static_cast<std::size_t>(rrc::kCellIdentityBytes), std::size_t{1} << 20));
    sizes->add_option("--format", format, "csv or md")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "md"}));
    sizes->callback([&] { rc = run_report_sizes(base_size, format); });

    double x = 0;
    double y = 0;
    double block_size = kDefaultBlockSize;
    auto* scal = report->add_subcommand("scalability", "Certificate rate and ledger growth");
    scal->add_option("--x", x, "Number of base stations")->required();
    scal->add_option("--y", y, "Average lifespan in years")->required();
    scal->add_option("--block-size", block_size, "Bytes per block")->capture_default_str();
    scal->callback([&] { rc = run_report_scalability(x, y, block_size); });

    auto* suites = report->add_subcommand("suites", "Signature and key sizes per suite");
    suites->callback([&] { std::cout << crypto::suite_table_csv(); });

    auto* scenario = app.add_subcommand("scenario", "Attack scenarios");
    scenario->require_subcommand(1);
    ScenarioArgs sa;
    auto* run = scenario->add_subcommand("run", "Run a scenario and write its reports");
    run->add_option("config", sa.config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--out", sa.out, "JSON report path")->capture_default_str();
    run->add_option("--csv", sa.csv, "CSV summary path (default: next to the JSON report)");
    run->callback([&] { rc = run_scenario_cmd(sa); });

    std::string bench_suite = "ecdsa-224";
    std::size_t iters = 1000;
    std::string bench_json;
    auto* bench = app.add_subcommand("bench", "Time ours vs certificate-chain verification");
    bench->add_option("--suite", bench_suite, "Signature suite")->capture_default_str();
    bench->add_option("--iters", iters, "Timed iterations (>= 100)")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{100}, std::size_t{100'000'000}));
    bench->add_option("--json", bench_json, "Also write the report as JSON");
    bench->callback([&] { rc = run_bench(bench_suite, iters, bench_json); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return rc;
}
