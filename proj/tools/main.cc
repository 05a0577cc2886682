#include "parkroute/cli.h"

int main(int argc, char** argv) { return parkroute::run_cli(argc, argv); }
