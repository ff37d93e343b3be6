#include <iostream>

#include "structnil/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return structnil::run(args, std::cout, std::cerr);
}
