#include <iostream>

#include "npl_cli/run.hpp"

int main(int argc, char** argv) { return npl::cli::main_entry(argc, argv, std::cout, std::cerr); }
