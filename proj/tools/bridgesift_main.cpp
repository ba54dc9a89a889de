#include "bridgesift/cli.hpp"

int main(int argc, char** argv) { return bridgesift::cli::run(argc, argv); }
