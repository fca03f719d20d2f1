#include <iostream>

#include "kalpha/cli.hpp"

int main(int argc, char** argv) {
  return kalpha::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
