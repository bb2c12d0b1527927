#include <iostream>
#include <string>
#include <vector>

#include "arcfit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return arcfit::run_cli(args, std::cout, std::cerr);
}
