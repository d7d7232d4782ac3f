#include <iostream>

#include "nonhalt/cli.hpp"

int main(int argc, char** argv) { return nonhalt::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
