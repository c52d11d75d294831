#include "roughvar/cli.hpp"

int main(int argc, char** argv) { return roughvar::cli::execute(argc, argv); }
