#include <iostream>
#include <string>
#include <vector>

#include "spidercalc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return spidercalc::run_cli(args, std::cout);
}
