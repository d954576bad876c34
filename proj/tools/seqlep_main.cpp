#include "seqlep/cli_app.hpp"

#include <iostream>

int main(int argc, char** argv) { return seqlep::run_cli(argc, argv, std::cout, std::cerr); }
