#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kappa {

/// Thrown when an argument violates an operation's precondition
/// (dimension mismatch, unnormalizable vector, unknown outcome label, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed document text. The message carries the line/field context.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed document that violates a schema invariant. Every failing
/// check is listed, not just the first.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> failures);

  const std::vector<std::string>& failures() const noexcept { return failures_; }

 private:
  std::vector<std::string> failures_;
};

}  // namespace kappa
