#include <iostream>

#include "steercert/cli/cli.hpp"

int main(int argc, char** argv) { return steercert::cli::main_entry(argc, argv, std::cout, std::cerr); }
