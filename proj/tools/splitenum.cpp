#include <iostream>

#include "splitenum/cli.hpp"

int main(int argc, char** argv) { return splitenum::cli::run(argc, argv, std::cout, std::cerr); }
