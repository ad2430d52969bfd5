#include <iostream>
#include <string>
#include <vector>

#include "longevity/cli/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return longevity::cli::run_cli(args, std::cout, std::cerr);
}
