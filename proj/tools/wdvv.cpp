#include <iostream>

#include "wdvv/cli.hpp"

int main(int argc, char** argv) { return wdvv::cli::run(argc, argv, std::cout, std::cerr); }
