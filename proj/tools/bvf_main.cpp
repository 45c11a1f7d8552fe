#include "bvf/cli.hpp"

int main(int argc, char** argv) { return bvf::cli::cli_main(argc, argv); }
