#include "ilcconv/cli.hpp"

int main(int argc, char** argv) { return ilcconv::cli::run(argc, argv); }
