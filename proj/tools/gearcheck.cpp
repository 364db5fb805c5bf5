#include "gearcheck/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return gearcheck::cli::run(argc, argv, std::cout, std::cerr);
}
