#include "bellbench/cli.hpp"

int main(int argc, char** argv) { return bellbench::run_cli(argc, argv); }
