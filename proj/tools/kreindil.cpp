#include "kreindil/cli.hpp"

int main(int argc, char** argv) { return kreindil::cli::run(argc, argv); }
