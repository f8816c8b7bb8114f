#include "dfx_ahp/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return dfx_ahp::cli::run(argc, argv, std::cout, std::cerr); }
