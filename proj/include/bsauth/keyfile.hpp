#pragma once

#include <filesystem>
#include <string>

#include "bsauth/crypto.hpp"

namespace bsauth {

/// {"suite": "ecdsa-224", "private": hex, "public": hex}, newline terminated.
std::string keypair_to_json(const crypto::KeyPair& kp);
/// Throws kParse on malformed JSON and kInvalidKey when the public half does
/// not match the private scalar.
crypto::KeyPair keypair_from_json(const std::string& text);

/// Refuses to replace an existing file unless overwrite is set (kIo).
void save_keypair(const crypto::KeyPair& kp, const std::filesystem::path& path,
                  bool overwrite = false);
crypto::KeyPair load_keypair(const std::filesystem::path& path);

}  // namespace bsauth
