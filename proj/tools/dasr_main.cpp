#include <iostream>

#include "dasr/cli/commands.hpp"

int main(int argc, char** argv) { return dasr::cli::main_entry(argc, argv, std::cout, std::cerr); }
