#include "efg/cli.hpp"

int main(int argc, char** argv) { return efg::cli_main(argc, argv); }
