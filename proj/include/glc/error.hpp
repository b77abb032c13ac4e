#pragma once

#include <stdexcept>
#include <string>

namespace glc {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A model or option combination the algorithms cannot handle, e.g. a
/// division by a factor product that has zero entries.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace glc
