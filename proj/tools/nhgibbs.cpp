#include "nhgibbs/cli.hpp"

int main(int argc, char** argv) { return nhg::run_cli(argc, argv); }
