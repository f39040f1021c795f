#include <iostream>

#include "lexaudit/cli.hpp"

int main(int argc, char** argv) { return lexaudit::run_cli(argc, argv, std::cout, std::cerr); }
