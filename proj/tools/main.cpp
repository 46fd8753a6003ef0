#include <iostream>
#include <string>
#include <vector>

#include "commsense/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return commsense::run_cli(args, std::cout, std::cerr);
}
