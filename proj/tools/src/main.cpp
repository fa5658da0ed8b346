#include "holex/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return holex::cli::run(argc, argv, std::cout, std::cerr); }
