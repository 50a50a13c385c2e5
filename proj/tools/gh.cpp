#include <iostream>

#include "gh/cli.hpp"

int main(int argc, char** argv) { return gh::cli::run(argc, argv, std::cout, std::cerr); }
