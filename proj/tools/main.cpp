#include "lscsp/cli.hpp"

int main(int argc, char **argv) { return lscsp::cli::run(argc, argv); }
