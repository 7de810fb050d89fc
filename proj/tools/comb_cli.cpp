#include <iostream>
#include <vector>

#include "comb/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const auto cfg = comb::cli::parse_config(args);
        return comb::cli::run(cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "{\"error\": \"" << e.what() << "\"}\n";
        return 1;
    }
}
