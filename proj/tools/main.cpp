#include <iostream>

#include "jlm/cli.hpp"

int main(int argc, char** argv) {
  return jlm::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
