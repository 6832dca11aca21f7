#include <iostream>

#include "mqunits/cli_app.hpp"

int main(int argc, char** argv) {
    return mqunits::run_cli(argc, argv, std::cout, std::cerr);
}
