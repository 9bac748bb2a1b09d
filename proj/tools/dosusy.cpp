#include <iostream>

#include "dosusy/cli.hpp"

int main(int argc, char** argv) { return dosusy::cli::run(argc, argv, std::cout, std::cerr); }
