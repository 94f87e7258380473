#include <iostream>

#include "grasslab/cli.hpp"

int main(int argc, char** argv) { return grasslab::run_cli(argc, argv, std::cout, std::cerr); }
