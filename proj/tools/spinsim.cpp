#include "spinsplit/cli.hpp"

int main(int argc, char** argv) { return spinsplit::run_main(argc, argv); }
