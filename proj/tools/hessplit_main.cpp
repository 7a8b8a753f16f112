#include <iostream>

#include "hessplit/cli.hpp"

int main(int argc, char** argv) {
    return hessplit::run_cli(argc, argv, std::cout, std::cerr);
}
