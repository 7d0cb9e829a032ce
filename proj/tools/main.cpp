#include "meshgap/cli.hpp"

int main(int argc, char** argv) { return meshgap::cli::run(argc, argv); }
