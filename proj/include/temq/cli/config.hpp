// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace temq::cli {

/// Flat key = value configuration file. Lines are `key = value`, blank, or
/// `#` comments. Keys must be unique; a schema_version key is required.
class KeyValueConfig {
public:
    static KeyValueConfig from_file(const std::string &path);
    static KeyValueConfig from_string(const std::string &text);

    bool has(const std::string &key) const;

    std::string get_string(const std::string &key) const;
    std::string get_string(const std::string &key,
                           const std::string &fallback) const;
    double get_double(const std::string &key) const;
    double get_double(const std::string &key, double fallback) const;
    std::uint64_t get_u64(const std::string &key) const;
    std::uint64_t get_u64(const std::string &key, std::uint64_t fallback) const;

    /// Comma list of reals: "5,10,30,50".
    std::vector<double> get_double_list(const std::string &key) const;
    /// Comma list or inclusive integer range: "2,3,4" or "2:12".
    std::vector<unsigned> get_unsigned_list(const std::string &key) const;
    std::vector<std::size_t> get_size_list(const std::string &key) const;

    /// Rejects keys outside the allowed set (schema_version is always allowed).
    void restrict_keys(const std::set<std::string> &allowed) const;

    /// FNV-1a over the canonicalized (key-sorted) content; stable across
    /// reordering and whitespace.
    std::string canonical_hash() const;

private:
    std::map<std::string, std::string> values_;
};

} // namespace temq::cli
