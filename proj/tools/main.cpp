#include "sehurdle/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return sehurdle::cli::run(argc, argv, std::cout, std::cerr); }
