#include <iostream>

#include "mmskit/cli.hpp"

int main(int argc, char** argv) { return mmskit::cli::run(argc, argv, std::cout, std::cerr); }
