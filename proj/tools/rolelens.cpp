#include <iostream>

#include "rolelens/cli.hpp"

int main(int argc, char** argv) { return rolelens::run_cli(argc, argv, std::cout, std::cerr); }
