#include "vesicle/cli.hpp"

int main(int argc, char** argv) { return vesicle::cli::run_main(argc, argv); }
