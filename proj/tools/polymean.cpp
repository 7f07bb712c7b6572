#include <iostream>
#include <string>
#include <vector>

#include "polymean/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return polymean::run(args, std::cout, std::cerr);
}
