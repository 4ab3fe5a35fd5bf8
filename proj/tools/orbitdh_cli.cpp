#include <iostream>

#include "orbitdh/cli.hpp"

int main(int argc, char** argv) { return orbitdh::cli::run(argc, argv, std::cout, std::cerr); }
