#include "bosonwb/cli.hpp"

int main(int argc, char** argv) { return bw::cli::main(argc, argv); }
