#include <iostream>
#include <string>
#include <vector>

#include "groves/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return groves::cli::run(args, std::cout, std::cerr);
}
