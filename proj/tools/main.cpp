#include "mjds/cli.hpp"

int main(int argc, char** argv) { return mjds::run_cli(argc, argv); }
