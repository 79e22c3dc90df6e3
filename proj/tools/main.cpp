#include <iostream>

#include "poolsim/cli/cli.hpp"

int main(int argc, char** argv) { return poolsim::cli::run_cli(argc, argv, std::cout, std::cerr); }
