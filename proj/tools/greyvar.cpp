#include <iostream>

#include "greyvar/cli.hpp"

int main(int argc, char** argv) {
  return greyvar::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
