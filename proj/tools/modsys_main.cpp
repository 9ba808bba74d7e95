#include <iostream>
#include <string>
#include <vector>

#include "modsys/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return modsys::cli_run(std::move(args), std::cout, std::cerr);
}
