#include "perron_cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return perron::cli::run(argc, argv, std::cout, std::cerr); }
