#include "opgb/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    const auto outcome = opgb::run_cli(argc, argv);
    std::cout << outcome.output;
    return outcome.exit_code;
}
