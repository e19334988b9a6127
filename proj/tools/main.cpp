#include <iostream>

#include "delsplit/cli.hpp"

int main(int argc, char** argv) { return delsplit::cli::run(argc, argv, std::cout, std::cerr); }
