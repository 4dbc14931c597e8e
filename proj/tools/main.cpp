#include <iostream>

#include "hyperdisp/cli.hpp"

int main(int argc, char** argv) { return hyperdisp::cli::run(argc, argv, std::cout, std::cerr); }
