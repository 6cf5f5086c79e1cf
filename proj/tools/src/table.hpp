#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kappa::cli {

// Fixed-width text table; the first column is left aligned, the rest right.
class Table {
 public:
  explicit Table(std::vector<std::string> headers);

  void add(std::vector<std::string> row);
  void print(std::ostream& out) const;

 private:
  std::vector<std::string> headers_;
  std::vector<std::vector<std::string>> rows_;
};

std::string fixed(double value, int digits = 6);
std::string sci(double value, int digits = 3);

}  // namespace kappa::cli
