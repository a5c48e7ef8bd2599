#include "skillgap/cli.hpp"

int main(int argc, char** argv) { return skillgap::cli::run(argc, argv); }
