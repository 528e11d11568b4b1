#include <iostream>

#include "qcms/cli.hpp"

int main(int argc, char** argv) { return qcms::run_cli(argc, argv, std::cout, std::cerr); }
