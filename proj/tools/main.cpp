#include "fracpq/cli.hpp"

int main(int argc, char** argv) { return fracpq::run_cli(argc, argv); }
