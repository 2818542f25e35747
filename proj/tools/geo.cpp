#include "geo/cli.hpp"

int main(int argc, char** argv) { return geo::cli::run(argc, argv); }
