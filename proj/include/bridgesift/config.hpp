#pragma once

// Flat key-value run configuration with dotted sections:
//
//   # comment
//   model.sigma = 1.0
//   model.jump.kind = compound_poisson
//   sweep.n_grid = 256,512,1024
//
// Keys are validated strictly; an unknown or malformed key is reported by
// name so config errors are actionable. canonicalize() renders the sorted
// key=value form that the manifest digest is taken over.

#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bridgesift/experiments.hpp"
#include "bridgesift/io.hpp"
#include "bridgesift/levy.hpp"

namespace bridgesift {

struct FlatConfig {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    const std::string& at(const std::string& key) const { return values.at(key); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace detail

inline FlatConfig parse_config_text(const std::string& text) {
    FlatConfig cfg;
    std::size_t lineno = 0, pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string line = detail::trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (cfg.values.count(key))
            throw ConfigError("config: duplicate key '" + key + "'");
        cfg.values[key] = value;
    }
    return cfg;
}

inline std::string canonicalize(const FlatConfig& cfg) {
    std::string out;
    for (const auto& [key, value] : cfg.values) out += key + "=" + value + "\n";
    return out;
}

namespace detail {

inline double config_double(const FlatConfig& cfg, const std::string& key, double fallback) {
    if (!cfg.has(key)) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(cfg.at(key), &used);
        if (used != cfg.at(key).size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a real number: '" + cfg.at(key) + "'");
    }
}

inline std::uint64_t config_u64(const FlatConfig& cfg, const std::string& key,
                                std::uint64_t fallback) {
    if (!cfg.has(key)) return fallback;
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(cfg.at(key), &used);
        if (used != cfg.at(key).size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a non-negative integer: '" +
                          cfg.at(key) + "'");
    }
}

inline const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "model.sigma",  "model.drift", "model.jump.kind",  "model.jump.rate",
        "model.jump.dist", "model.jump.mean", "model.jump.sd", "model.jump.a",
        "model.jump.p", "model.jump.alpha", "model.jump.scale",
        "simulate.n",   "simulate.stream",
        "sweep.n_grid", "sweep.replicates", "sweep.schemes",
        "seed"};
    return keys;
}

} // namespace detail

inline void reject_unknown_keys(const FlatConfig& cfg) {
    for (const auto& [key, value] : cfg.values)
        if (!detail::known_keys().count(key)) throw ConfigError("config: unknown key '" + key + "'");
}

inline LevyModel model_from_config(const FlatConfig& cfg) {
    LevyModel model;
    model.sigma = detail::config_double(cfg, "model.sigma", 1.0);
    model.drift = detail::config_double(cfg, "model.drift", 0.0);
    const std::string kind = cfg.has("model.jump.kind") ? cfg.at("model.jump.kind") : "none";
    if (kind == "none") {
        model.jumps = NoJumps{};
    } else if (kind == "compound_poisson") {
        CompoundPoissonJumps cp;
        cp.rate = detail::config_double(cfg, "model.jump.rate", 1.0);
        const std::string dist = cfg.has("model.jump.dist") ? cfg.at("model.jump.dist") : "gaussian";
        if (dist == "gaussian") {
            cp.dist = GaussianJump{detail::config_double(cfg, "model.jump.mean", 0.0),
                                   detail::config_double(cfg, "model.jump.sd", 1.0)};
        } else if (dist == "two_point") {
            cp.dist = TwoPointJump{detail::config_double(cfg, "model.jump.a", 1.0),
                                   detail::config_double(cfg, "model.jump.p", 0.5)};
        } else {
            throw ConfigError("config key 'model.jump.dist': expected gaussian or two_point, got '" +
                              dist + "'");
        }
        model.jumps = cp;
    } else if (kind == "symmetric_stable") {
        SymmetricStableJumps st;
        st.alpha = detail::config_double(cfg, "model.jump.alpha", 1.5);
        st.scale = detail::config_double(cfg, "model.jump.scale", 1.0);
        model.jumps = st;
    } else {
        throw ConfigError(
            "config key 'model.jump.kind': expected none, compound_poisson or symmetric_stable, "
            "got '" + kind + "'");
    }
    try {
        model.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    return model;
}

inline std::vector<std::size_t> n_grid_from_config(const FlatConfig& cfg, const std::string& key) {
    if (!cfg.has(key)) throw ConfigError("config: missing key '" + key + "'");
    std::vector<std::size_t> grid;
    const std::string& raw = cfg.at(key);
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        std::size_t comma = raw.find(',', pos);
        if (comma == std::string::npos) comma = raw.size();
        const std::string item = detail::trim(raw.substr(pos, comma - pos));
        pos = comma + 1;
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(item, &used);
            if (used != item.size() || v == 0) throw std::invalid_argument("bad entry");
            grid.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': bad grid entry '" + item + "'");
        }
    }
    if (grid.empty()) throw ConfigError("config key '" + key + "': empty grid");
    return grid;
}

inline std::vector<Scheme> schemes_from_config(const FlatConfig& cfg, const std::string& key) {
    if (!cfg.has(key)) return {Scheme::Quantile};
    std::vector<Scheme> schemes;
    const std::string& raw = cfg.at(key);
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        std::size_t comma = raw.find(',', pos);
        if (comma == std::string::npos) comma = raw.size();
        const std::string item = detail::trim(raw.substr(pos, comma - pos));
        pos = comma + 1;
        if (item.empty()) continue;
        if (item == "quantile") {
            schemes.push_back(Scheme::Quantile);
        } else if (item == "randomized") {
            schemes.push_back(Scheme::Randomized);
        } else {
            throw ConfigError("config key '" + key + "': unknown scheme '" + item + "'");
        }
    }
    if (schemes.empty()) throw ConfigError("config key '" + key + "': no schemes listed");
    return schemes;
}

inline SweepConfig sweep_from_config(const FlatConfig& cfg) {
    SweepConfig sweep;
    sweep.model = model_from_config(cfg);
    sweep.n_grid = n_grid_from_config(cfg, "sweep.n_grid");
    sweep.replicates =
        static_cast<std::size_t>(detail::config_u64(cfg, "sweep.replicates", 1));
    sweep.schemes = schemes_from_config(cfg, "sweep.schemes");
    sweep.master_seed = detail::config_u64(cfg, "seed", 0);
    try {
        sweep.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    return sweep;
}

} // namespace bridgesift
