#include "ep/cli.hpp"

int main(int argc, char** argv) { return ep::cli::run(argc, argv); }
