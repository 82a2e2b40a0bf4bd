#include <iostream>

#include "cli.hpp"

auto main(int argc, char** argv) -> int
{
    return ssarf::cli::run(argc, argv, std::cout, std::cerr);
}
