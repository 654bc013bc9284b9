#include <iostream>
#include <string>
#include <vector>

#include "crawlnet/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return crawlnet::dispatch(args, std::cout, std::cerr);
}
