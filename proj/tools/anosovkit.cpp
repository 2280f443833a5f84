#include "anosovkit/cli.hpp"

int main(int argc, char** argv) { return anosovkit::cli::run(argc, argv); }
