#include <iostream>

#include "polyvol/cli.hpp"

int main(int argc, char** argv) { return polyvol::run_cli(argc, argv, std::cout, std::cerr); }
