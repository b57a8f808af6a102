#include <iostream>

#include "cmr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cmr::cli::run_cli(args, std::cout, std::cerr);
}
