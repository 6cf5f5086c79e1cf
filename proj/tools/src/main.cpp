#include <iostream>

#include "kappa/cli.hpp"

int main(int argc, char** argv) {
  return kappa::cli::run({argv, argv + argc}, std::cout, std::cerr);
}
