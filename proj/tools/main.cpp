#include <iostream>

#include "sqwell/cli.hpp"

int main(int argc, char** argv) {
    return sqwell::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
