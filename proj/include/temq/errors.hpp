// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace temq {

/// Thrown when a randomly drawn BL signal exceeds its energy-derived
/// amplitude bound; the caller is expected to redraw.
class amplitude_bound_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when TEM parameters cannot satisfy the perfect-recovery
/// firing-rate conditions for the requested signal class.
class feasibility_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration-file error. Carries the offending key so the CLI can
/// name it in the message.
class config_error : public std::runtime_error {
public:
    config_error(std::string key, const std::string &message)
        : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
    const std::string &key() const { return key_; }

private:
    std::string key_;
};

} // namespace temq
