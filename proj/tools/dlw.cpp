#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return dl::runCli({argv + 1, argv + argc}, std::cout);
}
