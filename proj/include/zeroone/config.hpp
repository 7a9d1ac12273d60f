#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "zeroone/error.hpp"

namespace zeroone {

// Flat key-value config with [section] headers. Keys are stored and looked
// up as "section.key" ("" section for keys before any header). '#' and ';'
// start comments; duplicate keys are rejected so archived experiment configs
// stay unambiguous.
struct Config {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }

    const std::string& get(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end()) throw UsageError("config key missing: " + key);
        return it->second;
    }

    std::string get_or(const std::string& key, const std::string& fallback) const {
        auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    }

    double get_real(const std::string& key) const {
        const std::string& s = get(key);
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0')
            throw UsageError("config key " + key + ": not a real: " + s);
        return v;
    }

    std::uint64_t get_u64(const std::string& key) const {
        const std::string& s = get(key);
        char* end = nullptr;
        const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
        if (end == s.c_str() || *end != '\0')
            throw UsageError("config key " + key + ": not an integer: " + s);
        return v;
    }

    bool get_bool(const std::string& key) const {
        const std::string& s = get(key);
        if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "off" || s == "no") return false;
        throw UsageError("config key " + key + ": not a boolean: " + s);
    }

    // Bare keys must come out before any section header or they would change
    // meaning on reparse, so they get their own pass.
    std::string to_text() const {
        std::ostringstream out;
        bool any = false;
        for (const auto& [key, value] : values) {
            if (key.rfind('.') != std::string::npos) continue;
            out << key << " = " << value << '\n';
            any = true;
        }
        std::string cur_section;
        bool in_section = false;
        for (const auto& [key, value] : values) {
            const auto dot = key.rfind('.');
            if (dot == std::string::npos) continue;
            const std::string section = key.substr(0, dot);
            if (!in_section || section != cur_section) {
                if (any) out << '\n';
                out << '[' << section << "]\n";
                cur_section = section;
                in_section = true;
                any = true;
            }
            out << key.substr(dot + 1) << " = " << value << '\n';
        }
        return out.str();
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

}  // namespace detail

inline Config parse_config(std::istream& in, const std::string& origin) {
    Config cfg;
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw UsageError(origin + ":" + std::to_string(line_no) +
                                 ": unterminated section header");
            section = detail::trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw UsageError(origin + ":" + std::to_string(line_no) +
                                 ": empty section name");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError(origin + ":" + std::to_string(line_no) +
                             ": expected key = value");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty())
            throw UsageError(origin + ":" + std::to_string(line_no) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (!cfg.values.emplace(full, value).second)
            throw UsageError(origin + ":" + std::to_string(line_no) +
                             ": duplicate key: " + full);
    }
    return cfg;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    return parse_config(in, path);
}

}  // namespace zeroone
