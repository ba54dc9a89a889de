#pragma once

// CSV/JSON serialization. Doubles are printed with 17 significant digits so
// every written value round-trips to the identical bit pattern.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bridgesift/experiments.hpp"
#include "bridgesift/levy.hpp"
#include "bridgesift/recover.hpp"

namespace bridgesift {

// Unreadable/unwritable files and other filesystem failures (CLI exit 3).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed content or configuration (CLI exit 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string path_sample_csv(const PathSample& sample) {
    std::string out = "index,dx,dw\n";
    for (std::size_t k = 0; k < sample.n; ++k)
        out += std::to_string(k + 1) + "," + fmt17(sample.dx[k]) + "," + fmt17(sample.dw[k]) + "\n";
    return out;
}

inline nlohmann::json path_sample_json(const PathSample& sample) {
    return {{"n", sample.n}, {"dx", sample.dx}, {"dw", sample.dw}, {"w1", sample.w1}};
}

inline std::string grid_path_csv(const GridPath& path) {
    std::string out = "index,value\n";
    for (std::size_t i = 0; i < path.values.size(); ++i)
        out += std::to_string(i) + "," + fmt17(path.values[i]) + "\n";
    return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

} // namespace detail

// Reads the increment column of a CSV: the column named "dx" when present,
// otherwise the sole column of a single-column file.
inline std::vector<double> read_increments_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty increments file: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = detail::split_csv_line(line);
    std::size_t col = 0;
    bool found = false;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "dx") {
            col = i;
            found = true;
            break;
        }
    }
    if (!found) {
        if (header.size() != 1)
            throw ConfigError("no 'dx' column in " + path.string());
        col = 0;
    }
    std::vector<double> out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cells = detail::split_csv_line(line);
        if (col >= cells.size())
            throw ConfigError("row " + std::to_string(row) + " of " + path.string() +
                              " has too few columns");
        try {
            std::size_t used = 0;
            const double v = std::stod(cells[col], &used);
            if (used != cells[col].size() || !std::isfinite(v))
                throw std::invalid_argument("bad value");
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("row " + std::to_string(row) + " of " + path.string() +
                              ": not a finite real: '" + cells[col] + "'");
        }
    }
    if (out.empty()) throw ConfigError("no increment rows in " + path.string());
    return out;
}

inline std::string records_csv(const std::vector<ReplicateRecord>& records) {
    std::string out = "scheme,n,replicate,sup_error,argmax_index\n";
    for (const ReplicateRecord& r : records) {
        out += std::string(scheme_name(r.scheme)) + "," + std::to_string(r.n) + "," +
               std::to_string(r.replicate) + "," + fmt17(r.sup_error) + "," +
               std::to_string(r.argmax_index) + "\n";
    }
    return out;
}

inline std::string summary_csv(const std::vector<RateFit>& fits) {
    std::string out = "scheme,n,median,q90,slope\n";
    for (const RateFit& fit : fits) {
        const std::string slope = fit.slope ? fmt17(*fit.slope) : std::string();
        for (const PerNStats& row : fit.per_n) {
            out += std::string(scheme_name(fit.scheme)) + "," + std::to_string(row.n) + "," +
                   fmt17(row.median_error) + "," + fmt17(row.q90_error) + "," + slope + "\n";
        }
    }
    return out;
}

inline nlohmann::json rate_fit_json(const RateFit& fit) {
    nlohmann::json per_n = nlohmann::json::array();
    for (const PerNStats& row : fit.per_n)
        per_n.push_back({{"n", row.n}, {"median", row.median_error}, {"q90", row.q90_error}});
    nlohmann::json j{{"scheme", scheme_name(fit.scheme)},
                     {"per_n", per_n},
                     {"theory_slope", fit.theory_slope},
                     {"theory_slope_max", fit.theory_slope_max}};
    j["slope"] = fit.slope ? nlohmann::json(*fit.slope) : nlohmann::json();
    j["intercept"] = fit.intercept ? nlohmann::json(*fit.intercept) : nlohmann::json();
    return j;
}

} // namespace bridgesift
