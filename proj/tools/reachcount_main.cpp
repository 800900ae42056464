#include <iostream>

#include "reachcount/cli.hpp"

int main(int argc, char** argv) {
    return reachcount::run_cli(argc, argv, std::cout, std::cerr);
}
