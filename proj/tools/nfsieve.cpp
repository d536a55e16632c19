// nfsieve: command-line entry point.

#include <iostream>

#include "nfsieve/cli.hpp"

int main(int argc, char** argv) {
    return nfsieve::run_cli(argc, argv, std::cout, std::cerr);
}
