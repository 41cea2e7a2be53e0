#include <iostream>

#include "reachguard/cli.hpp"

int main(int argc, char** argv) {
  return reachguard::cli::run_cli(argc, argv, std::cout, std::cerr);
}
