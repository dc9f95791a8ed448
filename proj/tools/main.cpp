#include "segsolve/cli.hpp"

int main(int argc, char** argv) { return segsolve::cli::main(argc, argv); }
