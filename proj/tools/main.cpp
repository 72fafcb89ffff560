#include <iostream>
#include <string>
#include <vector>

#include "coldplasma/cli_io.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return coldplasma::run_cli(args, std::cout, std::cerr);
}
