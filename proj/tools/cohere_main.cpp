#include "cohere/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return cohere::cli::run(argc, argv, std::cout, std::cerr);
}
