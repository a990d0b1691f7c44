#include "olda/cli.hpp"

int main(int argc, char** argv) { return olda::run_cli(argc, argv); }
