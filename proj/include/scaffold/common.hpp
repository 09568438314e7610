#pragma once

#include <stdexcept>
#include <string>

namespace scaffold {

// Thrown on malformed corpora, config files, checkpoints. CLI exit code 2.
struct data_error : std::runtime_error {
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a forward/backward pass produces a non-finite value. CLI exit code 3.
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown on bad command lines or inconsistent run configuration. CLI exit code 1.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace scaffold
