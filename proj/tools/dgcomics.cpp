#include <iostream>

#include "dgcomics/cli.hpp"

int main(int argc, char** argv) { return dgc::cli::run(argc, argv, std::cout, std::cerr); }
