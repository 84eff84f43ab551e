#include "turan/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return turan::run(argc, argv, std::cout, std::cerr); }
