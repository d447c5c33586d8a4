#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seqlab {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A character (or parameter shape) does not belong to the alphabet in use.
class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// An LZW code stream references a dictionary entry that cannot exist.
class CorruptStream : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class NumericOverflow : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration, detected before any work starts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Seed generation exhausted its retry budget without reaching the target.
class GenerationFailure : public Error {
 public:
  GenerationFailure(const std::string& what, std::size_t closest)
      : Error(what), closest_complexity_(closest) {}

  std::size_t closest_complexity() const noexcept { return closest_complexity_; }

 private:
  std::size_t closest_complexity_;
};

}  // namespace seqlab
