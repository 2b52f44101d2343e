#pragma once

#include <stdexcept>
#include <string>

namespace lml {

/// Matrix or vector dimensions do not line up.
struct ShapeError : std::invalid_argument {
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Sample or triplet index outside its dataset.
struct IndexError : std::out_of_range {
  explicit IndexError(const std::string& what) : std::out_of_range(what) {}
};

/// Invalid configuration or unusable input. The CLI maps this to exit code 2.
struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed file contents.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative method produced a non-finite result.
struct DivergenceError : std::runtime_error {
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Unknown task or missing entry.
struct LookupError : std::out_of_range {
  explicit LookupError(const std::string& what) : std::out_of_range(what) {}
};

/// Non-fatal diagnostics go to stderr.
void log_warning(const std::string& message);

}  // namespace lml
