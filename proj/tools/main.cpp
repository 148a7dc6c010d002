#include <iostream>

#include "cli/cli.hpp"

int main(int argc, char** argv) {
  return wmwplan::cli::run_main(argc, argv, std::cout, std::cerr);
}
