#include "fockgauge/cli/commands.hpp"

int main(int argc, char** argv) { return fockgauge::cli::run(argc, argv); }
