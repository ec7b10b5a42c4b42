#include <iostream>
#include <string>
#include <vector>

#include "fairmetrics/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fairmetrics::RunCli(args, std::cout, std::cerr);
}
