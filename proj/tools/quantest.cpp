#include "quantest/cli/app.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return quantest::cli::main_entry(argc, argv, std::cout, std::cerr);
}
