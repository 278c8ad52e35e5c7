#include "evmigrate/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return evmigrate::run_cli(argc, argv, std::cout, std::cerr);
}
