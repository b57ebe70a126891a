#include <iostream>

#include "collapse/cli/commands.hpp"

int main(int argc, char** argv) { return collapse::cli::run_cli(argc, argv, std::cout, std::cerr); }
