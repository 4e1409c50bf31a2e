#include <iostream>
#include <string>
#include <vector>

#include "frex/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return frex::cli::run(args, std::cout, std::cerr);
}
