#include <iostream>

#include <momlab/cli.hpp>

int main(int argc, char** argv)
{
    return momlab::cli::run(argc, argv, std::cout, std::cerr);
}
