#pragma once

// Text formats: federation CSV (`name,population`) and `key = value` config files.

#include "twotier/median_sim.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace twotier {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline FederationSpec parse_federation(std::istream& in, const std::string& source = "federation") {
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::vector<Constituency> parts;
    while (std::getline(in, line)) {
        ++lineno;
        const auto row = detail::trim(line);
        if (row.empty()) continue;
        if (!header_seen) {
            if (row != "name,population")
                throw FormatError(source + ":" + std::to_string(lineno) + ": expected header 'name,population'");
            header_seen = true;
            continue;
        }
        const auto where = source + ":" + std::to_string(lineno) + ": row '" + std::string(row) + "'";
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
            throw FormatError(where + " must have exactly two fields");
        const auto name = detail::trim(row.substr(0, comma));
        if (name.empty()) throw FormatError(where + " has an empty name");
        std::int64_t pop = 0;
        try {
            pop = detail::parse_int64(row.substr(comma + 1), "population");
        } catch (const std::invalid_argument& e) {
            throw FormatError(where + ": " + e.what());
        }
        if (pop <= 0) throw FormatError(where + " has non-positive population " + std::to_string(pop));
        for (const auto& p : parts)
            if (p.name == name) throw FormatError(where + " duplicates constituency name '" + std::string(name) + "'");
        parts.push_back({std::string(name), static_cast<std::uint64_t>(pop)});
    }
    if (parts.empty()) throw FormatError(source + ": no constituencies");
    return FederationSpec(std::move(parts));
}

inline FederationSpec load_federation(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open federation file " + path.string());
    return parse_federation(in, path.string());
}

inline void write_federation(std::ostream& out, const FederationSpec& fed) {
    out << "name,population\n";
    for (const auto& c : fed.constituencies()) out << c.name << ',' << c.population << '\n';
}

/// Flat `key = value` records; `#` starts a comment.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::istream& in, const std::string& source = "config") {
        KeyValueConfig cfg;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            const auto row = detail::trim(line);
            if (row.empty()) continue;
            const auto eq = row.find('=');
            if (eq == std::string_view::npos)
                throw FormatError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
            const auto key = std::string(detail::trim(row.substr(0, eq)));
            if (key.empty()) throw FormatError(source + ":" + std::to_string(lineno) + ": empty key");
            if (!cfg.values_.emplace(key, std::string(detail::trim(row.substr(eq + 1)))).second)
                throw FormatError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
        return cfg;
    }

    static KeyValueConfig load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw FormatError("cannot open config file " + path.string());
        auto cfg = parse(in, path.string());
        cfg.base_dir_ = path.parent_path();
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw FormatError("missing config key '" + key + "'");
        used_.insert(key);
        return it->second;
    }

    std::string get(const std::string& key, const std::string& fallback) const {
        return has(key) ? get(key) : fallback;
    }

    /// Paths are resolved relative to the config file's directory.
    std::filesystem::path path(const std::string& key) const {
        std::filesystem::path p = get(key);
        return p.is_absolute() || base_dir_.empty() ? p : base_dir_ / p;
    }

    std::vector<std::string> unused_keys() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (!used_.count(k)) out.push_back(k);
        return out;
    }

private:
    std::map<std::string, std::string> values_;
    std::filesystem::path base_dir_;
    mutable std::set<std::string> used_;
};

inline std::vector<std::string> split_list(std::string_view s, char sep = ',') {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        const auto item = detail::trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (!item.empty()) out.emplace_back(item);
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

inline double parse_double(std::string_view s, const char* what) {
    const auto v = detail::trim(s);
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(std::string(v), &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size())
        throw FormatError(std::string("malformed ") + what + ": '" + std::string(v) + "'");
    return x;
}

inline std::uint64_t parse_count(std::string_view s, const char* what) {
    const auto x = parse_double(s, what);
    if (!(x >= 0) || x != std::floor(x) || x > 1.8e19)
        throw FormatError(std::string(what) + " must be a non-negative integer, got '" + std::string(s) + "'");
    return static_cast<std::uint64_t>(x);
}

inline std::vector<double> parse_real_list(std::string_view s, const char* what) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) out.push_back(parse_double(item, what));
    if (out.empty()) throw FormatError(std::string("empty ") + what);
    return out;
}

}  // namespace twotier
