#include <indram/cli.hpp>

#include <iostream>

auto main(int argc, char ** argv) -> int
{
    std::vector<std::string> args(argv, argv + argc);
    return indram::run_cli(args, std::cout, std::cerr);
}
