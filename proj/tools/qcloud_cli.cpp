#include <iostream>

#include "qcloud/cli/commands.hpp"

int main(int argc, char **argv) { return qcloud::cli::run_cli(argc, argv, std::cout, std::cerr); }
