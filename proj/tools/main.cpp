#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    return rmdp::cli::run(argc, argv, std::cout, std::cerr);
}
