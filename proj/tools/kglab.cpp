#include "kglab/cli.hpp"

int main(int argc, char** argv) { return kglab::cli::run(argc, argv); }
