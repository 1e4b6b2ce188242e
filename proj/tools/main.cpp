#include <iostream>
#include <string>
#include <vector>

#include "rv32sc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rv32sc::cli::run_cli(args, std::cout, std::cerr);
}
