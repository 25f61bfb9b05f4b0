#include <iostream>

#include "wurn/cli.hpp"

int main(int argc, char** argv)
{
    return wurn::cli::run(argc, argv, std::cout, std::cerr);
}
