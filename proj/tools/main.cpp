#include <iostream>

#include "pmot/cli.hpp"

int main(int argc, char** argv) {
    return pmot::run_cli(argc, argv, std::cout, std::cerr);
}
