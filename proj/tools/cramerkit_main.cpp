#include <iostream>
#include <string>
#include <vector>

#include "cramerkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cramer::cli::run(args, std::cout, std::cerr);
}
