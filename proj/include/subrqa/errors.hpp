#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subrqa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (substitution specs, JSON tables).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A precondition on the arguments of an operation does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed a configured size cap, or a saturation
/// protocol did not stabilise before reaching the cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Base densities could not be established for some base length.
class ReconstructionError : public Error {
 public:
  ReconstructionError(const std::string& what, std::size_t base_length)
      : Error(what), base_length_(base_length) {}

  std::size_t base_length() const noexcept { return base_length_; }

 private:
  std::size_t base_length_;
};

/// Two independent evaluation routes disagree.
class DiscrepancyError : public Error {
 public:
  using Error::Error;
};

}  // namespace subrqa
