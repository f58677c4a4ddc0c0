#include "hesim/cli.hpp"

int main(int argc, char** argv) { return hesim::cli::run(argc, argv); }
