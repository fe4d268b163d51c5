#include "lapval/cli.hpp"

int main(int argc, char** argv) { return lapval::cli::run(argc, argv); }
