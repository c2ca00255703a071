#pragma once
#include <stdexcept>
#include <string>

namespace gforge {

// Domain errors: violated preconditions, failed checks, out-of-range requests.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed textual input (ordinals, formulas, trees, files, CLI args).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gforge
