#include "cpeps/cli.hpp"

int main(int argc, char** argv) { return cpeps::run_cli(argc, argv); }
