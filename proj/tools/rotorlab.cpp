#include <iostream>

#include "rotorlab/cli/commands.hpp"

int main(int argc, char** argv) { return rotorlab::cli::run_cli(argc, argv, std::cout, std::cerr); }
