#include <iostream>

#include "rerc/cli.hpp"

int main(int argc, char** argv) { return rerc::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
