#include "latentgeom/cli.hpp"

int main(int argc, char** argv) { return latentgeom::cli::main(argc, argv); }
