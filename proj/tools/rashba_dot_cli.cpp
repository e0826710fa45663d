#include <iostream>
#include <string>
#include <vector>

#include "rashba_dot/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rashba_dot::cli::run(std::move(args), std::cout, std::cerr);
}
