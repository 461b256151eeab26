#include "complag/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return complag::cli::run(argc, argv, std::cout, std::cerr); }
