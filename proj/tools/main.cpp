#include <iostream>
#include <string>
#include <vector>

#include "springlink/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return springlink::cli::run(args, std::cout, std::cerr);
}
