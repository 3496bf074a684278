#include <iostream>

#include "diachron/cli.hpp"

int main(int argc, char** argv) { return diachron::cli::run(argc, argv, std::cout, std::cerr); }
