#include <iostream>

#include "tsruin_cli/cli.hpp"

int main(int argc, char** argv) { return tsruin::cli::run(argc, argv, std::cout, std::cerr); }
