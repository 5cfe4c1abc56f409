// gtdnoise_main.cpp — Entry point of the gtdnoise command-line tool.

#include <iostream>

#include "gtdnoise/app.hpp"

int main(int argc, char** argv) { return gtd::app::run_cli(argc, argv, std::cout, std::cerr); }
