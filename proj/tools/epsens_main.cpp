#include <iostream>

#include "epsens/app/commands.hpp"

int main(int argc, char** argv) { return epsens::app::run_cli(argc, argv, std::cout, std::cerr); }
