#include "weakcat/cli.hpp"

int main(int argc, char** argv) { return weakcat::cli_main(argc, argv); }
