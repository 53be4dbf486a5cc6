#include "tenseq/cli.hpp"

int main(int argc, char** argv) { return tenseq::cli::run(argc, argv); }
