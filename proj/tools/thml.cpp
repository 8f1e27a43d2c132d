#include <iostream>
#include <string>
#include <vector>

#include "thml/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return thml::run_main(args, std::cout, std::cerr);
}
