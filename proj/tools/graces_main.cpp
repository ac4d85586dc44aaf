#include <iostream>
#include <string>
#include <vector>

#include "graces/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return graces::cli::run(args, std::cout, std::cerr);
}
