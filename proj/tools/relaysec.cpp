#include <iostream>

#include "relaysec/cli.hpp"

int main(int argc, char** argv) { return relaysec::cli::run(argc, argv, std::cout, std::cerr); }
