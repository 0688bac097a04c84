#include "barnorm/error.hpp"

namespace barnorm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input:
      return "invalid-input";
    case ErrorKind::resource_limit:
      return "resource-limit";
    case ErrorKind::degenerate_body:
      return "degenerate-body";
    case ErrorKind::internal_consistency:
      return "internal-inconsistency";
    case ErrorKind::reducible_input:
      return "reducible-input";
    case ErrorKind::not_extremal:
      return "not-extremal";
    case ErrorKind::parse:
      return "parse-error";
    case ErrorKind::schema:
      return "schema-violation";
    case ErrorKind::io:
      return "io-error";
  }
  return "error";
}

}  // namespace barnorm
