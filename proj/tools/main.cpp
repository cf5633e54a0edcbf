#include "losim/cli.hpp"

int main(int argc, char** argv) { return losim::runCli(argc, argv); }
