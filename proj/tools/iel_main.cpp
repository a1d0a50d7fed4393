#include <iostream>

#include "iel/cli.hpp"

int main(int argc, char** argv) { return iel::cli::dispatch(argc, argv, std::cout, std::cerr); }
