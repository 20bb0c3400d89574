#include <iostream>
#include <string>
#include <vector>

#include "vshs/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vshs::cli::run(args, std::cout, std::cerr);
}
