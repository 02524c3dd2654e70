#include <iostream>

#include "vdo/cli.hpp"

int main(int argc, char** argv) { return vdo::cli::run_cli(argc, argv, std::cout, std::cerr); }
