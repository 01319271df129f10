#include "chebsolve/cli.hpp"

int main(int argc, char** argv) { return chebsolve::run_cli(argc, argv); }
