#include <iostream>

#include <kbh/cli.hpp>

int main(int argc, char** argv) { return kbh::cli::run(argc, argv, std::cout, std::cerr); }
