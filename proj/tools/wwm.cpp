#include "wwm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return wwm::dispatch(argc, argv, std::cout, std::cerr); }
