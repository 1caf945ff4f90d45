#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return v2v::cli::run(argc, argv, std::cout, std::cerr); }
