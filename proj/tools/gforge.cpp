#include <iostream>
#include <string>
#include <vector>

#include "gforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gforge::dispatch(args, std::cout, std::cerr);
}
