// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <iostream>

auto main(int argc, char** argv) -> int
{
    auto args = std::vector<std::string>(argv + 1, argv + argc);
    return fairds::cli::run(args, std::cout, std::cerr);
}
