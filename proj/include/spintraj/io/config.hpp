// SPDX-License-Identifier: Apache-2.0
//
// Flat key-value configuration files with [section] headers, '#' or ';'
// comments, and diff-friendly "key = value" lines. Grammar:
//
//   file     := line*
//   line     := blank | comment | section | entry
//   section  := '[' name ']'
//   entry    := key '=' value        (whitespace trimmed on both sides)
//
// Keys are unique per section; values keep their raw text and are converted
// on access. Errors carry the offending line number.

#pragma once

#include "spintraj/linalg.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace spintraj::io {

struct ConfigParseError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

class KeyValueConfig {
  public:
    static KeyValueConfig parse_string(const std::string& text) {
        KeyValueConfig cfg;
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string s = trim(line);
            if (s.empty() || s[0] == '#' || s[0] == ';') continue;
            if (s.front() == '[') {
                if (s.back() != ']')
                    throw ConfigParseError("line " + std::to_string(lineno) +
                                           ": unterminated section header");
                section = trim(s.substr(1, s.size() - 2));
                if (section.empty())
                    throw ConfigParseError("line " + std::to_string(lineno) +
                                           ": empty section name");
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw ConfigParseError("line " + std::to_string(lineno) +
                                       ": expected 'key = value', got '" + s + "'");
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            if (key.empty())
                throw ConfigParseError("line " + std::to_string(lineno) + ": empty key");
            const std::string full = section_key(section, key);
            if (cfg.entries_.count(full))
                throw ConfigParseError("line " + std::to_string(lineno) + ": duplicate key '" +
                                       full + "'");
            cfg.entries_[full] = {value, lineno};
        }
        return cfg;
    }

    static KeyValueConfig parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config file '" + path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_string(buf.str());
    }

    std::optional<std::string> get(const std::string& section, const std::string& key) const {
        auto it = entries_.find(section_key(section, key));
        if (it == entries_.end()) return std::nullopt;
        return it->second.value;
    }

    std::string require(const std::string& section, const std::string& key) const {
        auto v = get(section, key);
        if (!v)
            throw ConfigParseError("missing required key '" + section_key(section, key) + "'");
        return *v;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) const {
        auto v = get(section, key);
        return v ? to_double(section, key, *v) : fallback;
    }

    int get_int(const std::string& section, const std::string& key, int fallback) const {
        auto v = get(section, key);
        if (!v) return fallback;
        try {
            size_t pos = 0;
            const int out = std::stoi(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("");
            return out;
        } catch (const std::exception&) {
            throw ConfigParseError(field_msg(section, key) + "expected an integer, got '" + *v +
                                   "'");
        }
    }

    bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
        auto v = get(section, key);
        if (!v) return fallback;
        std::string s = *v;
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
            return static_cast<char>(std::tolower(c));
        });
        if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
        if (s == "false" || s == "no" || s == "off" || s == "0") return false;
        throw ConfigParseError(field_msg(section, key) + "expected a boolean, got '" + *v + "'");
    }

    /// comma-separated list, items trimmed, empties dropped
    std::vector<std::string> get_list(const std::string& section, const std::string& key) const {
        auto v = get(section, key);
        std::vector<std::string> out;
        if (!v) return out;
        std::istringstream in(*v);
        std::string item;
        while (std::getline(in, item, ',')) {
            const std::string t = trim(item);
            if (!t.empty()) out.push_back(t);
        }
        return out;
    }

    std::vector<double> get_double_list(const std::string& section, const std::string& key) const {
        std::vector<double> out;
        for (const auto& s : get_list(section, key)) out.push_back(to_double(section, key, s));
        return out;
    }

    double to_double(const std::string& section, const std::string& key,
                     const std::string& text) const {
        try {
            size_t pos = 0;
            const double out = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument("");
            return out;
        } catch (const std::exception&) {
            throw ConfigParseError(field_msg(section, key) + "expected a number, got '" + text +
                                   "'");
        }
    }

  private:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static std::string trim(const std::string& s) {
        size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }

    static std::string section_key(const std::string& section, const std::string& key) {
        return section.empty() ? key : section + "." + key;
    }

    std::string field_msg(const std::string& section, const std::string& key) const {
        auto it = entries_.find(section_key(section, key));
        const int line = it == entries_.end() ? 0 : it->second.line;
        return "line " + std::to_string(line) + ", field '" + section_key(section, key) + "': ";
    }

    std::map<std::string, Entry> entries_;
};

}  // namespace spintraj::io
