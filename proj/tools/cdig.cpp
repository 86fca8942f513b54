#include "cdig/cli.hpp"

int main(int argc, char** argv) { return cdig::cli::main(argc, argv); }
