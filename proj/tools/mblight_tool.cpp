#include <iostream>
#include <mblight/cli.hpp>

int main(int argc, char** argv)
{
    return mblight::cli::main(argc, argv, std::cout, std::cerr);
}
