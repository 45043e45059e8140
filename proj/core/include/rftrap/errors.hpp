#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rftrap {

/// Generator specification that cannot be turned into a generator (unknown
/// catalog entry, missing field, bad periods, ...).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problem located inside an expression string, with the byte offset of the
/// offending token: syntax errors, unbound parameters, bad exponents, trig in
/// polynomial mode, incommensurate modes.
class ParseError : public SpecError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : SpecError(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// An analysis routine was called at a point that does not satisfy its
/// precondition (not a node, not on a guide line, no transition in range).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rftrap
