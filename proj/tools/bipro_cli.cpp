#include <iostream>
#include <string>
#include <vector>

#include "bipro/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bipro::cli::run(std::move(args), std::cout, std::cerr);
}
