#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rwtrack {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown letters or otherwise unreadable input.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A size guard (ball enumeration, hull volume, stored trajectory length) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFactor : public Error {
 public:
  using Error::Error;
};

// The group does not satisfy the structural hypotheses an experiment needs.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace rwtrack
