#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return getme::cli::run(argc, argv, std::cout, std::cerr);
}
