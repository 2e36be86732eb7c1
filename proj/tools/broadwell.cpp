#include <iostream>

#include "broadwell/cli.hpp"

int main(int argc, char** argv) { return broadwell::run_cli(argc, argv, std::cout, std::cerr); }
