#include <iostream>

#include "raf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return raf::run(args, std::cout, std::cerr);
}
