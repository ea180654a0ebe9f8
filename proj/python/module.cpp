#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bsauth/crypto.hpp"
#include "bsauth/error.hpp"
#include "bsauth/geo.hpp"
#include "bsauth/keyfile.hpp"
#include "bsauth/ledger.hpp"
#include "bsauth/rrc.hpp"
#include "bsauth/sim.hpp"

namespace py = pybind11;
using namespace bsauth;

namespace {

Bytes to_bytes(const py::bytes& b) {
    const std::string s = b;
    return Bytes(s.begin(), s.end());
}

py::bytes to_py(const Bytes& b) {
    return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

py::dict scalability_dict(const ScalabilityReport& r) {
    py::dict d;
    d["base_stations"] = r.base_stations;
    d["lifespan_years"] = r.lifespan_years;
    d["block_size"] = r.block_size;
    d["cert_rate"] = r.cert_rate;
    d["ledger_growth"] = r.ledger_growth;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Base-station certificate scheme: sizes, signatures, ledger maths and scenarios";

    static py::exception<Error> error(m, "BsauthError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    m.attr("SIB1_LIMIT") = rrc::kSib1Limit;
    m.attr("DEFAULT_BASE_SIZE") = rrc::kDefaultBaseSize;

    m.def("suites", [] {
        py::list out;
        for (const auto& s : crypto::all_suites()) {
            py::dict d;
            d["name"] = s.name;
            d["slug"] = s.slug;
            d["key_bits"] = s.key_bits;
            d["signature_size"] = s.signature_size;
            d["public_key_size"] = s.public_key_size;
            d["available"] = crypto::suite_available(s.id);
            out.append(d);
        }
        return out;
    });

    m.def(
        "encoded_size",
        [](const std::string& scheme, const std::string& suite, std::size_t base_size) {
            return rrc::encoded_size(rrc::parse_scheme(scheme), crypto::parse_suite(suite), base_size);
        },
        py::arg("scheme"), py::arg("suite"), py::arg("base_size"));

    m.def(
        "budget_table",
        [](std::size_t base_size) {
            py::list out;
            for (const auto& r : rrc::budget_table(base_size)) {
                py::dict d;
                d["scheme"] = rrc::to_string(r.scheme);
                d["suite"] = crypto::suite_info(r.suite).name;
                d["size"] = r.size;
                d["fits"] = r.fits;
                out.append(d);
            }
            return out;
        },
        py::arg("base_size") = rrc::kDefaultBaseSize);

    m.def("base_size_window", [] {
        const auto w = rrc::base_size_window();
        return py::make_tuple(w.lo, w.hi);
    });

    m.def(
        "scalability",
        [](double x, double y, double block_size) { return scalability_dict(scalability(x, y, block_size)); },
        py::arg("x"), py::arg("y"), py::arg("block_size") = kDefaultBlockSize);

    m.def(
        "distance",
        [](double lat1, double lon1, double lat2, double lon2, const std::string& metric) {
            return distance({lat1, lon1}, {lat2, lon2}, parse_distance_metric(metric.c_str()));
        },
        py::arg("lat1"), py::arg("lon1"), py::arg("lat2"), py::arg("lon2"),
        py::arg("metric") = "haversine");

    m.def(
        "generate_keypair",
        [](const std::string& suite, std::optional<std::uint64_t> seed) {
            return keypair_to_json(crypto::generate_keypair(crypto::parse_suite(suite), seed));
        },
        py::arg("suite"), py::arg("seed") = py::none(),
        "Returns the key file JSON text.");

    m.def(
        "sign",
        [](const std::string& key_json, const py::bytes& message) {
            const auto kp = keypair_from_json(key_json);
            return to_py(crypto::sign(kp.private_key, to_bytes(message)).bytes);
        },
        py::arg("key_json"), py::arg("message"));

    m.def(
        "verify",
        [](const std::string& suite, const py::bytes& public_key, const py::bytes& message,
           const py::bytes& signature) {
            const auto id = crypto::parse_suite(suite);
            const auto key = crypto::PublicKey::from_bytes(id, to_bytes(public_key));
            return crypto::verify(key, to_bytes(message),
                                  crypto::Signature::from_bytes(id, to_bytes(signature)));
        },
        py::arg("suite"), py::arg("public_key"), py::arg("message"), py::arg("signature"));

    m.def(
        "run_scenario",
        [](const std::string& config_json) {
            const auto config = sim::parse_scenario_config(config_json);
            std::string report;
            {
                py::gil_scoped_release release;
                report = sim::run_scenario(config).to_json();
            }
            return report;
        },
        py::arg("config_json"), "Runs a scenario and returns the JSON report text.");

    m.def(
        "benchmark",
        [](const std::string& suite, std::size_t iterations) {
            const auto id = crypto::parse_suite(suite);
            std::string report;
            {
                py::gil_scoped_release release;
                report = sim::benchmark_verification(id, iterations).to_json();
            }
            return report;
        },
        py::arg("suite") = "ecdsa-224", py::arg("iterations") = 1000);
}
