#include <iostream>

#include "rdl/cli.hpp"

int main(int argc, char** argv) { return rdl::cli::run(argc, argv, std::cout, std::cerr); }
