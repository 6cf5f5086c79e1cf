#include "kappa/errors.hpp"

#include <utility>

namespace kappa {

namespace {

std::string join_failures(const std::vector<std::string>& failures) {
  std::string out = "validation failed";
  for (const auto& f : failures) {
    out += "\n  - ";
    out += f;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> failures)
    : std::runtime_error(join_failures(failures)), failures_(std::move(failures)) {}

}  // namespace kappa
