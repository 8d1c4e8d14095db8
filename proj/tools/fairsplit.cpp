#include <iostream>

#include "fairsplit/cli.hpp"

int main(int argc, char** argv) { return fairsplit::run_cli(argc, argv, std::cout, std::cerr); }
