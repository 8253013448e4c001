#include <iostream>

#include "bpyield/cli.hpp"

int main(int argc, char** argv) {
  return bpyield::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
