#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return mechsq::cli::run(argc, argv, std::cout, std::cerr); }
