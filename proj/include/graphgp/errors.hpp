// Error taxonomy shared across the library. Configuration problems get their
// own type so the CLI can map them to a dedicated exit code; numerical
// failures use std::runtime_error; precondition violations on in-process API
// calls use std::invalid_argument / std::domain_error.
#pragma once

#include <stdexcept>
#include <string>

namespace graphgp {

struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace graphgp
