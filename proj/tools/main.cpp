#include <vector>

#include "hhsmc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hhsmc::cli::run(args);
}
