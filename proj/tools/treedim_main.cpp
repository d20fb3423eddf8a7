#include <iostream>

#include "treedim/cli.hpp"

int main(int argc, char **argv) {
  return treedim::run_cli(argc, argv, std::cout, std::cerr);
}
