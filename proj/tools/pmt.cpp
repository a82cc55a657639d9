#include <iostream>
#include <string>
#include <vector>

#include "pmt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pmt::run_cli(args, std::cout, std::cerr);
}
