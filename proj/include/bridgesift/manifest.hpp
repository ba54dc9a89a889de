#pragma once

// Run manifests: every output file sits beside a manifest recording the
// command, the SHA-256 digest of the canonicalized config, the tool version,
// the master seed, and a UTC timestamp. Outputs themselves carry no
// timestamps, so reruns stay byte-identical.

#include <cstdint>
#include <ctime>
#include <string>
#include <string_view>

#include <json.hpp>
#include <openssl/evp.h>

#include "bridgesift/version.hpp"

namespace bridgesift {

inline std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

struct RunManifest {
    std::string command;
    std::string config_digest;
    std::string tool_version = kToolVersion;
    std::uint64_t master_seed = 0;
    std::string timestamp_utc;

    nlohmann::json to_json() const {
        return {{"command", command},
                {"config_digest", config_digest},
                {"tool_version", tool_version},
                {"master_seed", master_seed},
                {"timestamp_utc", timestamp_utc}};
    }
};

inline std::string utc_timestamp_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

inline RunManifest make_manifest(const std::string& command, const std::string& canonical_config,
                                 std::uint64_t master_seed) {
    RunManifest m;
    m.command = command;
    m.config_digest = sha256_hex(canonical_config);
    m.master_seed = master_seed;
    m.timestamp_utc = utc_timestamp_now();
    return m;
}

} // namespace bridgesift
