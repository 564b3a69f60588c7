// SPDX-License-Identifier: Apache-2.0
#include "temq/cli/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "temq/errors.hpp"

namespace temq::cli {

namespace {

std::string trim(const std::string &s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin])))
        ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1])))
        --end;
    return s.substr(begin, end - begin);
}

double parse_double(const std::string &key, const std::string &text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size())
            throw std::invalid_argument(text);
        return v;
    } catch (const std::exception &) {
        throw config_error(key, "not a real number: '" + text + "'");
    }
}

std::uint64_t parse_u64(const std::string &key, const std::string &text) {
    std::uint64_t v = 0;
    const auto *begin = text.data();
    const auto *end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw config_error(key, "not a nonnegative integer: '" + text + "'");
    return v;
}

std::vector<std::string> split_commas(const std::string &text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        parts.push_back(trim(item));
    return parts;
}

} // namespace

KeyValueConfig KeyValueConfig::from_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("config", "cannot open file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_string(buffer.str());
}

KeyValueConfig KeyValueConfig::from_string(const std::string &text) {
    KeyValueConfig cfg;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config", "line " + std::to_string(line_no) +
                                             ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error("config", "line " + std::to_string(line_no) +
                                             ": empty key");
        if (cfg.values_.count(key))
            throw config_error(key, "duplicate key");
        cfg.values_[key] = value;
    }
    if (!cfg.values_.count("schema_version"))
        throw config_error("schema_version", "missing required key");
    if (cfg.values_.at("schema_version") != "1")
        throw config_error("schema_version", "unsupported version '" +
                                                 cfg.values_.at("schema_version") +
                                                 "' (expected 1)");
    return cfg;
}

bool KeyValueConfig::has(const std::string &key) const {
    return values_.count(key) > 0;
}

std::string KeyValueConfig::get_string(const std::string &key) const {
    const auto it = values_.find(key);
    if (it == values_.end())
        throw config_error(key, "missing required key");
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string &key,
                                       const std::string &fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string &key) const {
    return parse_double(key, get_string(key));
}

double KeyValueConfig::get_double(const std::string &key,
                                  double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::uint64_t KeyValueConfig::get_u64(const std::string &key) const {
    return parse_u64(key, get_string(key));
}

std::uint64_t KeyValueConfig::get_u64(const std::string &key,
                                      std::uint64_t fallback) const {
    return has(key) ? get_u64(key) : fallback;
}

std::vector<double>
KeyValueConfig::get_double_list(const std::string &key) const {
    std::vector<double> values;
    for (const auto &part : split_commas(get_string(key))) {
        if (part.empty())
            throw config_error(key, "empty list element");
        values.push_back(parse_double(key, part));
    }
    if (values.empty())
        throw config_error(key, "empty list");
    return values;
}

std::vector<unsigned>
KeyValueConfig::get_unsigned_list(const std::string &key) const {
    const std::string text = get_string(key);
    std::vector<unsigned> values;
    const std::size_t colon = text.find(':');
    if (colon != std::string::npos && text.find(',') == std::string::npos) {
        const auto lo = parse_u64(key, trim(text.substr(0, colon)));
        const auto hi = parse_u64(key, trim(text.substr(colon + 1)));
        if (hi < lo)
            throw config_error(key, "descending range");
        for (std::uint64_t v = lo; v <= hi; ++v)
            values.push_back(static_cast<unsigned>(v));
        return values;
    }
    for (const auto &part : split_commas(text)) {
        if (part.empty())
            throw config_error(key, "empty list element");
        values.push_back(static_cast<unsigned>(parse_u64(key, part)));
    }
    if (values.empty())
        throw config_error(key, "empty list");
    return values;
}

std::vector<std::size_t>
KeyValueConfig::get_size_list(const std::string &key) const {
    std::vector<std::size_t> values;
    for (unsigned v : get_unsigned_list(key))
        values.push_back(v);
    return values;
}

void KeyValueConfig::restrict_keys(const std::set<std::string> &allowed) const {
    for (const auto &[key, value] : values_) {
        if (key != "schema_version" && !allowed.count(key))
            throw config_error(key, "unknown key");
    }
}

std::string KeyValueConfig::canonical_hash() const {
    // std::map iterates in key order, so the digest ignores file ordering.
    std::uint64_t h = 0xCBF29CE484222325ULL;
    const auto mix = [&h](const std::string &s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001B3ULL;
        }
    };
    for (const auto &[key, value] : values_) {
        mix(key);
        mix("=");
        mix(value);
        mix("\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace temq::cli
