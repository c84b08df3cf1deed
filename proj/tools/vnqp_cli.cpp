#include "cli.hpp"

int main(int argc, char** argv) { return vnqp::cli::cli_main(argc, argv); }
