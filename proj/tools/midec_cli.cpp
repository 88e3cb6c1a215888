#include <iostream>
#include <string>
#include <vector>

#include "midec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return midec::cli_main(args, std::cout, std::cerr);
}
