#include "pcq/cli.hpp"

int main(int argc, char** argv) { return pcq::cli::main(argc, argv); }
