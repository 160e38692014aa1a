#include <iostream>

#include "mixnorm/cli.hpp"

int main(int argc, char** argv) { return mixnorm::run_cli(argc, argv, std::cout, std::cerr); }
