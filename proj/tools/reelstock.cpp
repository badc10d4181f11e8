#include <iostream>

#include "reelstock/cli.hpp"

int main(int argc, char** argv) { return reelstock::cli::run(argc, argv, std::cout, std::cerr); }
