#include "increparse/cli.hpp"

int main(int argc, char** argv) { return increparse::run_cli(argc, argv); }
