#include "commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return kkcli::run(argc, argv, std::cout, std::cerr); }
