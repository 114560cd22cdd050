#include <iostream>

#include "pslcmc/cli.hpp"

int main(int argc, char** argv) { return pslcmc::cli::run(argc, argv, std::cout, std::cerr); }
