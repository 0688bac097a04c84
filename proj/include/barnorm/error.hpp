#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "barnorm/linalg.hpp"

namespace barnorm {

enum class ErrorKind {
  invalid_input,
  resource_limit,
  degenerate_body,
  internal_consistency,
  reducible_input,
  not_extremal,
  parse,
  schema,
  io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when a matrix family shares an invariant line. The witness is a unit
// direction of that line when one is known.
class ReducibleInput : public Error {
 public:
  ReducibleInput(const std::string& what, std::optional<Vec2> witness)
      : Error(ErrorKind::reducible_input, what), witness_(witness) {}

  const std::optional<Vec2>& witness() const noexcept { return witness_; }

 private:
  std::optional<Vec2> witness_;
};

}  // namespace barnorm
