#pragma once

#include <stdexcept>
#include <string>

namespace alsim {

/// Bad config file, unknown key, or violated parameter bound. CLI exit 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Episode failed to reach N_max within the tick budget. CLI exit 2.
struct StallError : std::runtime_error {
  explicit StallError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File read/write failure, message carries the path. CLI exit 2.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace alsim
