#include <iostream>

#include "dtcopula/cli.hpp"

int main(int argc, char** argv) {
  return dtcopula::cli::main(argc, argv, std::cout, std::cerr);
}
