#include <iostream>

#include "budget_fair/cli.hpp"

int main(int argc, char** argv) { return budget_fair::cli::run(argc, argv, std::cout, std::cerr); }
