#include "app/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return thermo::app::run_command(argc, argv, std::cout, std::cerr); }
