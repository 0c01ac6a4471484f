#include <iostream>

#include "kitecc/cli.hpp"

int main(int argc, char** argv) { return kitecc::cli::run(argc, argv, std::cout, std::cerr); }
