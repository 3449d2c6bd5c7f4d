#include <iostream>

#include "kreinlab/cli/commands.hpp"

int main(int argc, char** argv) { return kreinlab::cli::run(argc, argv, std::cout, std::cerr); }
