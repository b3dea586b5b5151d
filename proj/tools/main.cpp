#include "congsub/cli.hpp"

int main(int argc, char** argv) { return congsub::cli::run(argc, argv); }
