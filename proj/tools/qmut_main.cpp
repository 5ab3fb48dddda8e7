#include "qmut/cli.hpp"

int main(int argc, char** argv) { return qmut::run_cli(argc, argv); }
