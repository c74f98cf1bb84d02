#include <iostream>

#include "nckit/cli.hpp"

int main(int argc, char** argv) { return nckit::cli::run(argc, argv, std::cout, std::cerr); }
