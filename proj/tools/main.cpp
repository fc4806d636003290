#include "cli.hpp"

int main(int argc, char** argv) { return dlo::cli::run(argc, argv); }
