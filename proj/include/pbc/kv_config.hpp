#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pbc/error.hpp"

namespace pbc {

/// Flat `key = value` text with optional `[section]` headers and `#`
/// comments. Keys are addressed as "section.key" ("key" before any header).
/// Insertion order is kept so a config can be echoed back verbatim.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::istream& in, const std::string& origin = "config") {
        KeyValueConfig cfg;
        std::string line, section;
        for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']' || line.size() < 3)
                    throw ParseError(origin + ":" + std::to_string(lineno) + ": malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            if (key.empty()) throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
            cfg.set(section.empty() ? key : section + "." + key, trim(line.substr(eq + 1)));
        }
        return cfg;
    }

    static KeyValueConfig parse_string(const std::string& text, const std::string& origin = "config") {
        std::istringstream in(text);
        return parse(in, origin);
    }

    void set(const std::string& key, const std::string& value) {
        auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
        if (it == entries_.end()) entries_.emplace_back(key, value);
        else it->second = value;
    }

    bool has(const std::string& key) const { return find(key) != nullptr; }

    std::optional<std::string> get(const std::string& key) const {
        if (const auto* v = find(key)) return *v;
        return std::nullopt;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto* v = find(key);
        return v ? *v : fallback;
    }

    double get_double(const std::string& key, double fallback) const {
        const auto* v = find(key);
        return v ? to_double(key, *v) : fallback;
    }

    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const {
        const auto* v = find(key);
        if (!v) return fallback;
        std::uint64_t out = 0;
        const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
        if (ec != std::errc{} || ptr != v->data() + v->size())
            throw ParseError("field '" + key + "': expected a non-negative integer, got '" + *v + "'");
        return out;
    }

    bool get_bool(const std::string& key, bool fallback) const {
        const auto* v = find(key);
        if (!v) return fallback;
        if (*v == "true" || *v == "1" || *v == "yes") return true;
        if (*v == "false" || *v == "0" || *v == "no") return false;
        throw ParseError("field '" + key + "': expected a boolean, got '" + *v + "'");
    }

    std::vector<double> get_doubles(const std::string& key) const {
        std::vector<double> out;
        const auto* v = find(key);
        if (!v) return out;
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
        return out;
    }

    /// Entries under "section." with the prefix stripped.
    std::vector<std::pair<std::string, std::string>> section(const std::string& name) const {
        std::vector<std::pair<std::string, std::string>> out;
        const std::string prefix = name + ".";
        for (const auto& [k, v] : entries_)
            if (k.rfind(prefix, 0) == 0) out.emplace_back(k.substr(prefix.size()), v);
        return out;
    }

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    /// Writes the entries grouped by section, in first-seen section order.
    void write(std::ostream& out) const {
        std::vector<std::string> sections;
        for (const auto& [k, v] : entries_) {
            const auto dot = k.find('.');
            const std::string s = dot == std::string::npos ? "" : k.substr(0, dot);
            if (std::find(sections.begin(), sections.end(), s) == sections.end()) sections.push_back(s);
        }
        std::stable_partition(sections.begin(), sections.end(), [](const std::string& s) { return s.empty(); });
        bool first = true;
        for (const auto& s : sections) {
            if (!s.empty()) {
                if (!first) out << '\n';
                out << '[' << s << "]\n";
            }
            first = false;
            for (const auto& [k, v] : entries_) {
                const auto dot = k.find('.');
                const std::string ks = dot == std::string::npos ? "" : k.substr(0, dot);
                if (ks == s) out << (s.empty() ? k : k.substr(dot + 1)) << " = " << v << '\n';
            }
        }
    }

    static std::string trim(const std::string& s) {
        std::size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }

private:
    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : entries_)
            if (k == key) return &v;
        return nullptr;
    }

    static double to_double(const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            const double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ParseError("field '" + key + "': expected a number, got '" + v + "'");
        }
    }

    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace pbc
