#include "fracheat/io.hpp"

#include <iostream>

int main(int argc, char **argv) { return fracheat::run_guarded(argc, argv, std::cout, std::cerr); }
