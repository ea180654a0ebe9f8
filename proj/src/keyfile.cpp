#include "bsauth/keyfile.hpp"

#include <fstream>
#include <iterator>
#include <json.hpp>

#include "bsauth/error.hpp"

namespace bsauth {

std::string keypair_to_json(const crypto::KeyPair& kp) {
    nlohmann::ordered_json j;
    j["suite"] = crypto::suite_info(kp.private_key.suite()).slug;
    j["private"] = to_hex(kp.private_key.bytes());
    j["public"] = to_hex(kp.public_key.bytes());
    return j.dump(2) + "\n";
}

crypto::KeyPair keypair_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kParse, std::string("key file: ") + e.what());
    }
    if (!j.is_object() || !j.contains("suite") || !j.contains("private") ||
        !j["suite"].is_string() || !j["private"].is_string()) {
        throw Error(ErrorCode::kParse, "key file: expected string fields 'suite' and 'private'");
    }
    const auto suite = crypto::parse_suite(j["suite"].get<std::string>());
    auto priv = crypto::PrivateKey::from_bytes(suite, from_hex(j["private"].get<std::string>()));
    if (j.contains("public")) {
        if (!j["public"].is_string() ||
            from_hex(j["public"].get<std::string>()) != priv.public_key().bytes()) {
            throw Error(ErrorCode::kInvalidKey, "key file: public key does not match private key");
        }
    }
    return {priv.public_key(), priv};
}

void save_keypair(const crypto::KeyPair& kp, const std::filesystem::path& path, bool overwrite) {
    if (!overwrite && std::filesystem::exists(path)) {
        throw Error(ErrorCode::kIo, path.string() + " already exists (use --force to replace it)");
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
    out << keypair_to_json(kp);
    if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

crypto::KeyPair load_keypair(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return keypair_from_json(text);
}

}  // namespace bsauth
