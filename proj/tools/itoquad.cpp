#include <string>
#include <vector>

#include <itoquad/cli.hpp>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return itoquad::cli_main(std::move(args));
}
