#include <iostream>

#include "swcat/cli.hpp"

int main(int argc, char** argv) { return swcat::cli::run(argc, argv, std::cout, std::cerr); }
