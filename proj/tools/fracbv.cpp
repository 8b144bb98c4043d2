#include <iostream>

#include "fracbv/cli.hpp"

int main(int argc, char** argv) { return fracbv::run_cli(argc, argv, std::cout, std::cerr); }
