#include <iostream>
#include <string>
#include <vector>

#include "leadtime/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return leadtime::dispatch(std::move(args), std::cout, std::cerr);
}
