#include "hvol/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hvol::cli::run(argc, argv, std::cout, std::cerr); }
