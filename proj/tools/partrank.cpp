#include <iostream>

#include "partrank/cli.hpp"

int main(int argc, char** argv) { return partrank::run_cli(argc, argv, std::cout, std::cerr); }
