#include <iostream>
#include <string>
#include <vector>

#include "seascape/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return seascape::run_cli(args, std::cout, std::cerr);
}
