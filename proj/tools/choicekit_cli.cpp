#include <iostream>

#include "choicekit/commands.hpp"

int main(int argc, char** argv) { return choicekit::run_cli(argc, argv, std::cout, std::cerr); }
