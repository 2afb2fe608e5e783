#include <iostream>

#include "ids/cli.hpp"

int main(int argc, char** argv) { return ids::cli::run(argc, argv, std::cout, std::cerr); }
