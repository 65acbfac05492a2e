#include <iostream>

#include "sumnet/cli.hpp"

int main(int argc, char** argv) {
  return sumnet::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
