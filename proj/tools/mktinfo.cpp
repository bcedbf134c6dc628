#include <iostream>

#include "mktinfo/cli.hpp"

int main(int argc, char** argv) { return mktinfo::cli::run_cli(argc, argv, std::cout, std::cerr); }
