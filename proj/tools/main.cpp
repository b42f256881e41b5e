#include "ricci/cli.hpp"

int main(int argc, char** argv) { return ricci::run_cli(argc, argv); }
