#include <iostream>

#include "polyswitch/cli.hpp"

int main(int argc, char** argv) { return polyswitch::run_cli(argc, argv, std::cout, std::cerr); }
