#include <string>
#include <vector>

#include "barrenlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return barrenlab::cli::run(args);
}
