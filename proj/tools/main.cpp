#include "cli.hpp"

int main(int argc, char** argv) { return risemi::cli::cli_main(argc, argv); }
