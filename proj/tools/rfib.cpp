#include "cli.hpp"

int main(int argc, char** argv) { return rfib::cli::run(argc, argv); }
