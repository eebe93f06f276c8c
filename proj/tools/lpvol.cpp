#include <iostream>
#include <string>
#include <vector>

#include "lpvol/cli.hpp"

int main(int argc, char** argv) {
    return lpvol::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
