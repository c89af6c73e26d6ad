#include <iostream>
#include <string>
#include <vector>

#include "jigsolve/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return jigsolve::cli::run(args, std::cout, std::cerr);
}
