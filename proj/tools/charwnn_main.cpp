#include <iostream>
#include <string>
#include <vector>

#include "charwnn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return charwnn::run_cli(args, std::cout, std::cerr);
}
